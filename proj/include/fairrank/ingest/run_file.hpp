#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairrank/ingest/text_table.hpp"

namespace fairrank::ingest {

struct RunEntry {
  std::string doc;
  double score = 0.0;
  long long rank = 0;

  friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

/// Ranked candidate lists per query, each in rank order.
struct RunList {
  std::map<std::string, std::vector<RunEntry>, NaturalLess> queries;

  friend bool operator==(const RunList&, const RunList&) = default;
};

inline constexpr std::size_t kDefaultRunDepth = 50;

/// Parses TREC `qid Q0 docid rank score tag` lines. Per query, ranks must
/// strictly increase in file order and docs must be unique. Each query keeps
/// its first `depth` entries; std::nullopt keeps everything.
/// Throws FormatError.
RunList parse_run_file(const std::filesystem::path& path,
                       std::optional<std::size_t> depth = kDefaultRunDepth);

/// Writes the TREC 6-column format with `tag` in the last column.
void write_run_file(const RunList& run, const std::filesystem::path& path, std::string_view tag);

/// Run entries for an ordered doc list: rank k gets score n - k + 1.
std::vector<RunEntry> entries_from_order(const std::vector<std::string>& docs);

}  // namespace fairrank::ingest
