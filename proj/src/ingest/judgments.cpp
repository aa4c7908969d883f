#include "fairrank/ingest/judgments.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "fairrank/errors.hpp"

namespace fairrank::ingest {

QueryJudgments::QueryJudgments(std::vector<std::string> intents) {
  std::sort(intents.begin(), intents.end(), NaturalLess{});
  intents.erase(std::unique(intents.begin(), intents.end()), intents.end());
  if (intents.empty()) throw InvariantViolation("a query needs at least one intent");
  intents_ = std::move(intents);
  priors_.assign(intents_.size(), 1.0 / static_cast<double>(intents_.size()));
}

std::optional<std::size_t> QueryJudgments::intent_index(std::string_view intent) const {
  auto it = std::lower_bound(intents_.begin(), intents_.end(), intent, NaturalLess{});
  if (it == intents_.end() || *it != intent) return std::nullopt;
  return static_cast<std::size_t>(it - intents_.begin());
}

void QueryJudgments::set_priors(std::vector<double> priors) {
  if (priors.size() != intents_.size()) throw InvariantViolation("one prior per intent required");
  double sum = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvariantViolation("intent priors must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvariantViolation("intent priors must sum to 1");
  priors_ = std::move(priors);
}

bool QueryJudgments::judge(std::string_view intent, std::string_view doc, int relevance) {
  auto k = intent_index(intent);
  if (!k) throw InvariantViolation("intent '" + std::string(intent) + "' is not declared");
  if (relevance != 0 && relevance != 1) throw InvariantViolation("judgments must be binary");
  auto it = judged_.find(doc);
  if (it == judged_.end()) {
    it = judged_.emplace(std::string(doc), std::vector<std::uint8_t>(intents_.size(), 0)).first;
  }
  const bool changed = it->second[*k] != relevance;
  it->second[*k] = static_cast<std::uint8_t>(relevance);
  return changed;
}

int QueryJudgments::relevance(std::string_view doc, std::size_t intent) const {
  auto it = judged_.find(doc);
  if (it == judged_.end()) return 0;
  return it->second[intent];
}

const std::vector<std::uint8_t>* QueryJudgments::relevance_row(std::string_view doc) const {
  auto it = judged_.find(doc);
  return it == judged_.end() ? nullptr : &it->second;
}

std::vector<std::string> QueryJudgments::relevant_docs() const {
  std::vector<std::string> out;
  for (const auto& [doc, row] : judged_) {
    if (std::any_of(row.begin(), row.end(), [](std::uint8_t r) { return r != 0; })) {
      out.push_back(doc);
    }
  }
  return out;
}

const QueryJudgments& IntentJudgments::query(std::string_view qid) const {
  auto it = queries.find(qid);
  if (it == queries.end()) throw UnknownQuery("no judgments for query '" + std::string(qid) + "'");
  return it->second;
}

IntentJudgments parse_diversity_qrels(const std::filesystem::path& path) {
  struct Line {
    std::string qid, intent, doc;
    int rel;
  };
  std::vector<Line> parsed;
  std::map<std::string, std::set<std::string>, NaturalLess> declared;

  const auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto f = split_whitespace(lines[n]);
    if (f.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(n + 1) + ": ";
    if (f.size() != 4) throw ParseError(where + "expected 'qid intent_id doc_id rel'");
    int rel;
    if (f[3] == "0") {
      rel = 0;
    } else if (f[3] == "1") {
      rel = 1;
    } else {
      throw ParseError(where + "relevance '" + std::string(f[3]) + "' is not 0 or 1");
    }
    parsed.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), rel});
    declared[parsed.back().qid].insert(parsed.back().intent);
  }

  IntentJudgments out;
  for (auto& [qid, intents] : declared) {
    out.queries.emplace(qid, QueryJudgments(std::vector<std::string>(intents.begin(), intents.end())));
  }
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& l : parsed) {
    if (!seen.emplace(l.qid, l.intent, l.doc).second) ++out.duplicate_lines;
    out.queries.at(l.qid).judge(l.intent, l.doc, l.rel);
  }
  return out;
}

}  // namespace fairrank::ingest
