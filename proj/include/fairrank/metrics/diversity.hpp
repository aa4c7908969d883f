#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "fairrank/ingest/judgments.hpp"

namespace fairrank::metrics {

enum class IdealRanking {
  greedy,      ///< greedy gain maximisation over the relevant docs
  exhaustive,  ///< every ordering; only for <= kMaxExhaustiveDocs relevant docs
};

inline constexpr std::size_t kMaxExhaustiveDocs = 8;

/// Intent-aware nDCG. The doc at rank k earns sum_i J(d,i) (1-alpha)^c_i,
/// with c_i the number of earlier docs relevant to intent i, discounted by
/// 1/log2(k+1). Normalised by the DCG of an ideal ordering of the query's
/// relevant docs; 0 when that ideal is 0.
///
/// Throws InvalidArgument for alpha outside [0,1) or an exhaustive ideal
/// over too many docs.
double alpha_ndcg(std::span<const std::string> ranking, const ingest::QueryJudgments& judgments,
                  double alpha, std::size_t k, IdealRanking ideal = IdealRanking::greedy);

/// Ideal DCG used by alpha_ndcg (exposed for tests and diagnostics).
double alpha_ideal_dcg(const ingest::QueryJudgments& judgments, double alpha, std::size_t k,
                       IdealRanking ideal);

/// Intent-aware expected reciprocal rank with R = 0.5 for a relevant doc:
/// sum_i P(i|q) sum_{k<=K} (R_{i,k}/k) prod_{j<k} (1 - R_{i,j}).
double err_ia(std::span<const std::string> ranking, const ingest::QueryJudgments& judgments,
              std::size_t k);

/// Fraction of the query's intents covered by a relevant doc in the top k.
double s_recall(std::span<const std::string> ranking, const ingest::QueryJudgments& judgments,
                std::size_t k);

// Query-id front ends; UnknownQuery when `qid` has no judgments.
double alpha_ndcg(std::span<const std::string> ranking, const ingest::IntentJudgments& judgments,
                  std::string_view qid, double alpha, std::size_t k,
                  IdealRanking ideal = IdealRanking::greedy);
double err_ia(std::span<const std::string> ranking, const ingest::IntentJudgments& judgments,
              std::string_view qid, std::size_t k);
double s_recall(std::span<const std::string> ranking, const ingest::IntentJudgments& judgments,
                std::string_view qid, std::size_t k);

}  // namespace fairrank::metrics
