#include "fairrank/ingest/run_file.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "fairrank/errors.hpp"

namespace fairrank::ingest {

RunList parse_run_file(const std::filesystem::path& path, std::optional<std::size_t> depth) {
  RunList run;
  std::map<std::string, std::set<std::string>, NaturalLess> seen_docs;

  const auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto f = split_whitespace(lines[n]);
    if (f.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(n + 1) + ": ";
    if (f.size() != 6) throw FormatError(where + "expected 'qid Q0 docid rank score tag'");

    RunEntry e;
    e.doc = std::string(f[2]);
    try {
      e.rank = parse_int(f[3], path, n + 1);
      e.score = parse_double(f[4], path, n + 1);
    } catch (const ParseError& err) {
      throw FormatError(err.what());
    }
    std::string qid(f[0]);
    auto& list = run.queries[qid];
    if (!list.empty() && e.rank <= list.back().rank) {
      throw FormatError(where + "rank " + std::to_string(e.rank) + " does not increase for query '" +
                        qid + "'");
    }
    if (!seen_docs[qid].insert(e.doc).second) {
      throw FormatError(where + "document '" + e.doc + "' repeated for query '" + qid + "'");
    }
    list.push_back(std::move(e));
  }
  if (depth) {
    for (auto& [qid, list] : run.queries) {
      if (list.size() > *depth) list.resize(*depth);
    }
  }
  return run;
}

void write_run_file(const RunList& run, const std::filesystem::path& path, std::string_view tag) {
  std::string out;
  char buf[64];
  for (const auto& [qid, list] : run.queries) {
    for (const auto& e : list) {
      std::snprintf(buf, sizeof buf, " %lld %.6f ", e.rank, e.score);
      out += qid + " Q0 " + e.doc + buf + std::string(tag) + '\n';
    }
  }
  write_text(path, out);
}

std::vector<RunEntry> entries_from_order(const std::vector<std::string>& docs) {
  std::vector<RunEntry> out;
  out.reserve(docs.size());
  for (std::size_t k = 0; k < docs.size(); ++k) {
    out.push_back({docs[k], static_cast<double>(docs.size() - k), static_cast<long long>(k + 1)});
  }
  return out;
}

}  // namespace fairrank::ingest
