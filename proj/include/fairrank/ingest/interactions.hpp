#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fairrank/core/interaction_log.hpp"

namespace fairrank::ingest {

/// Header names of the four interaction columns. Datasets with other
/// conventions remap them through their dataset config.
struct ColumnSpec {
  std::string user = "user_id";
  std::string item = "item_id";
  std::string label = "label";
  std::string timestamp = "timestamp";
  char delimiter = '\t';
};

/// Header line followed by one record per non-empty line, in file order.
/// Extra columns are ignored.
///
/// Throws SchemaError naming a column missing from the header and
/// ParseError naming the first malformed line (1-based).
InteractionLog parse_interactions(const std::filesystem::path& path, const ColumnSpec& columns = {});

/// `item_id<TAB>group1|group2|...`, no header. Blank lines are skipped.
std::map<std::string, std::vector<std::string>> parse_item_groups(const std::filesystem::path& path);

/// `user_id<TAB>group_id`, no header.
std::map<std::string, std::string> parse_user_groups(const std::filesystem::path& path);

}  // namespace fairrank::ingest
