#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fairrank/ingest/judgments.hpp"
#include "fairrank/ingest/run_file.hpp"

namespace fairrank::diversify {

/// rel[d][i] in [0, 1] for pool doc d and intent i.
using IntentRelevance = std::vector<std::vector<double>>;

/// Candidate pool of one query: the first `depth` run entries, their scores
/// min-max normalised over the pool (a constant pool maps to 0.5), intent
/// priors and per-intent relevance. Pool index order is the original rank
/// order and breaks every tie.
class QueryPool {
 public:
  /// Relevance taken from binary judgments; priors from `judgments`.
  QueryPool(const std::vector<ingest::RunEntry>& run, const ingest::QueryJudgments& judgments,
            std::size_t depth = ingest::kDefaultRunDepth);

  /// Relevance from a predictor. Throws InvariantViolation unless `relevance`
  /// has one row per pool doc with one value in [0, 1] per prior, and the
  /// priors are non-negative and sum to 1.
  QueryPool(const std::vector<ingest::RunEntry>& run, std::vector<double> priors,
            IntentRelevance relevance, std::size_t depth = ingest::kDefaultRunDepth);

  std::size_t size() const { return docs_.size(); }
  std::size_t num_intents() const { return priors_.size(); }
  const std::string& doc(std::size_t d) const { return docs_[d]; }
  double score(std::size_t d) const { return scores_[d]; }
  double prior(std::size_t i) const { return priors_[i]; }
  double relevance(std::size_t d, std::size_t i) const { return relevance_[d][i]; }

 private:
  void load_run(const std::vector<ingest::RunEntry>& run, std::size_t depth);

  std::vector<std::string> docs_;
  std::vector<double> scores_;
  std::vector<double> priors_;
  IntentRelevance relevance_;
};

/// Greedy xQuAD. Each step picks the unselected doc maximising
///   (1 - lambda) s(d) + lambda sum_i P(i) rel(d, i) prod_{d' in S} (1 - rel(d', i)).
/// Returns pool indices, min(k, pool size) of them. Throws EmptyCandidates
/// for an empty pool and InvalidArgument for lambda outside [0, 1].
std::vector<std::size_t> xquad(const QueryPool& pool, double lambda, std::size_t k);

struct Pm2Outcome {
  std::vector<std::size_t> order;  ///< pool indices
  std::vector<double> seats;       ///< per intent, after the last step
};

/// Greedy PM2 with Sainte-Lague quotients v_i / (2 s_i + 1). Each step takes
/// the intent i* with the largest quotient (lowest index on ties), picks
///   argmax lambda qt_{i*} rel(d, i*) + (1 - lambda) sum_{i != i*} qt_i rel(d, i)
/// and hands out seats rel(d, i) / sum_j rel(d, j) when that sum is positive.
/// Errors as xquad.
Pm2Outcome pm2(const QueryPool& pool, double lambda, std::size_t k);

enum class Method { xquad, pm2 };

Method parse_method(std::string_view name);
std::string to_string(Method m);

struct DiversifyParams {
  Method method = Method::xquad;
  double lambda = 0.5;
  std::size_t k = 20;
  std::size_t depth = ingest::kDefaultRunDepth;
};

/// Diversifies every query of `run` with binary judgments. Queries without
/// judgments keep their original order, truncated to k. Output scores follow
/// ingest::entries_from_order.
ingest::RunList diversify_run(const ingest::RunList& run, const ingest::IntentJudgments& judgments,
                              const DiversifyParams& params);

}  // namespace fairrank::diversify
