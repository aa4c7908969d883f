#pragma once

#include <cstddef>
#include <vector>

#include "fairrank/core/catalog.hpp"
#include "fairrank/core/interaction_log.hpp"
#include "fairrank/core/ranking_slate.hpp"
#include "fairrank/core/score_matrix.hpp"

namespace fairrank::metrics {

/// Relevant items per user index, each list sorted ascending.
using RelevantItems = std::vector<std::vector<ItemIndex>>;

/// Items of `log` per catalog user (records of unknown users/items are ignored).
RelevantItems relevant_from_log(const InteractionLog& log, const Catalog& catalog);

// The three accuracy metrics average over users with at least one relevant
// item and throw UndefinedMetric when there is none. Binary gains, cutoff k
// (InvalidArgument when k exceeds the slate size).

double ndcg_at_k(const RankingSlate& slates, const RelevantItems& relevant, std::size_t k);
double mrr_at_k(const RankingSlate& slates, const RelevantItems& relevant, std::size_t k);
double hit_at_k(const RankingSlate& slates, const RelevantItems& relevant, std::size_t k);

struct RerankQuality {
  double r_ndcg = 0.0;
  double u_loss = 0.0;
};

/// Quality of re-ranked slates relative to the score-sorted top-k.
///
/// Per user: r_ndcg = DCG(new slate) / DCG(original top-k), with the original
/// scores as gains; u_loss = 1 - sum(new slate scores) / sum(top-k scores).
/// Users whose original top-k mass is not positive are skipped; if every
/// user is skipped this throws UndefinedMetric. A slate item without an
/// original score raises InvalidArgument.
RerankQuality rerank_quality(const RankingSlate& new_slates, const ScoreMatrix& original,
                             std::size_t k);

}  // namespace fairrank::metrics
