#include "fairrank/metrics/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fairrank/errors.hpp"

namespace fairrank::metrics {

namespace {

using Row = const std::vector<std::uint8_t>*;

double discount(std::size_t rank) { return 1.0 / std::log2(static_cast<double>(rank) + 1.0); }

double novelty_gain(Row row, const std::vector<int>& seen, double keep) {
  if (row == nullptr) return 0.0;
  double gain = 0.0;
  for (std::size_t i = 0; i < row->size(); ++i) {
    if ((*row)[i]) gain += std::pow(keep, seen[i]);
  }
  return gain;
}

void mark(Row row, std::vector<int>& seen, int delta) {
  if (row == nullptr) return;
  for (std::size_t i = 0; i < row->size(); ++i) {
    if ((*row)[i]) seen[i] += delta;
  }
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)");
}

double exhaustive_best(const std::vector<Row>& rows, std::vector<bool>& used, std::vector<int>& seen,
                       double keep, std::size_t depth, std::size_t rank) {
  if (rank > depth) return 0.0;
  double best = 0.0;
  for (std::size_t d = 0; d < rows.size(); ++d) {
    if (used[d]) continue;
    const double gain = novelty_gain(rows[d], seen, keep) * discount(rank);
    used[d] = true;
    mark(rows[d], seen, +1);
    best = std::max(best, gain + exhaustive_best(rows, used, seen, keep, depth, rank + 1));
    mark(rows[d], seen, -1);
    used[d] = false;
  }
  return best;
}

}  // namespace

double alpha_ideal_dcg(const ingest::QueryJudgments& judgments, double alpha, std::size_t k,
                       IdealRanking ideal) {
  check_alpha(alpha);
  const double keep = 1.0 - alpha;
  std::vector<Row> rows;
  for (const auto& doc : judgments.relevant_docs()) rows.push_back(judgments.relevance_row(doc));
  std::vector<int> seen(judgments.num_intents(), 0);
  const std::size_t depth = std::min(k, rows.size());

  if (ideal == IdealRanking::exhaustive) {
    if (rows.size() > kMaxExhaustiveDocs) {
      throw InvalidArgument("exhaustive ideal ranking limited to " +
                            std::to_string(kMaxExhaustiveDocs) + " relevant docs");
    }
    std::vector<bool> used(rows.size(), false);
    return exhaustive_best(rows, used, seen, keep, depth, 1);
  }

  std::vector<bool> used(rows.size(), false);
  double dcg = 0.0;
  for (std::size_t rank = 1; rank <= depth; ++rank) {
    std::size_t pick = rows.size();
    double best = -1.0;
    for (std::size_t d = 0; d < rows.size(); ++d) {
      if (used[d]) continue;
      const double gain = novelty_gain(rows[d], seen, keep);
      if (gain > best) {
        best = gain;
        pick = d;
      }
    }
    used[pick] = true;
    mark(rows[pick], seen, +1);
    dcg += best * discount(rank);
  }
  return dcg;
}

double alpha_ndcg(std::span<const std::string> ranking, const ingest::QueryJudgments& judgments,
                  double alpha, std::size_t k, IdealRanking ideal) {
  const double ideal_dcg = alpha_ideal_dcg(judgments, alpha, k, ideal);
  if (ideal_dcg <= 0.0) return 0.0;
  const double keep = 1.0 - alpha;
  std::vector<int> seen(judgments.num_intents(), 0);
  double dcg = 0.0;
  for (std::size_t r = 0; r < std::min(k, ranking.size()); ++r) {
    Row row = judgments.relevance_row(ranking[r]);
    dcg += novelty_gain(row, seen, keep) * discount(r + 1);
    mark(row, seen, +1);
  }
  return dcg / ideal_dcg;
}

double err_ia(std::span<const std::string> ranking, const ingest::QueryJudgments& judgments,
              std::size_t k) {
  constexpr double kStop = 0.5;  // (2^1 - 1) / 2^1
  const auto priors = judgments.priors();
  double total = 0.0;
  for (std::size_t i = 0; i < judgments.num_intents(); ++i) {
    double reach = 1.0;
    double err = 0.0;
    for (std::size_t r = 0; r < std::min(k, ranking.size()); ++r) {
      if (judgments.relevance(ranking[r], i)) {
        err += reach * kStop / static_cast<double>(r + 1);
        reach *= 1.0 - kStop;
      }
    }
    total += priors[i] * err;
  }
  return total;
}

double s_recall(std::span<const std::string> ranking, const ingest::QueryJudgments& judgments,
                std::size_t k) {
  std::vector<bool> covered(judgments.num_intents(), false);
  for (std::size_t r = 0; r < std::min(k, ranking.size()); ++r) {
    if (Row row = judgments.relevance_row(ranking[r])) {
      for (std::size_t i = 0; i < row->size(); ++i) {
        if ((*row)[i]) covered[i] = true;
      }
    }
  }
  const auto hits = std::count(covered.begin(), covered.end(), true);
  return static_cast<double>(hits) / static_cast<double>(judgments.num_intents());
}

double alpha_ndcg(std::span<const std::string> ranking, const ingest::IntentJudgments& judgments,
                  std::string_view qid, double alpha, std::size_t k, IdealRanking ideal) {
  return alpha_ndcg(ranking, judgments.query(qid), alpha, k, ideal);
}

double err_ia(std::span<const std::string> ranking, const ingest::IntentJudgments& judgments,
              std::string_view qid, std::size_t k) {
  return err_ia(ranking, judgments.query(qid), k);
}

double s_recall(std::span<const std::string> ranking, const ingest::IntentJudgments& judgments,
                std::string_view qid, std::size_t k) {
  return s_recall(ranking, judgments.query(qid), k);
}

}  // namespace fairrank::metrics
