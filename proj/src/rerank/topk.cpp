#include <limits>

#include "detail.hpp"
#include "fairrank/rerank/rerankers.hpp"

namespace fairrank::rerank {

RankingSlate topk(const RerankContext& ctx) {
  detail::require_candidates(ctx);
  const auto& scores = ctx.scores();
  std::vector<std::vector<ItemIndex>> slates(scores.num_users());
  for (UserIndex u = 0; u < scores.num_users(); ++u) {
    std::vector<detail::Keyed> pool;
    pool.reserve(scores.row(u).size());
    for (const auto& e : scores.row(u)) pool.push_back({e.score, e.score, e.item});
    slates[u] = detail::take_top(pool, ctx.k());
  }
  return RankingSlate(ctx.k(), std::move(slates));
}

RankingSlate min_regularizer(const RerankContext& ctx, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("min_regularizer: lambda must be >= 0");
  detail::require_candidates(ctx);
  const auto& scores = ctx.scores();
  const auto& catalog = ctx.catalog();
  std::vector<double> utility(catalog.num_groups(), 0.0);
  std::vector<double> normalised(catalog.num_groups());
  std::vector<std::vector<ItemIndex>> slates(scores.num_users());

  std::size_t round = 0;
  for (UserIndex u : ctx.arrival_order()) {
    const double scale = std::max(1.0, static_cast<double>(round * ctx.k()));
    double worst = std::numeric_limits<double>::infinity();
    for (GroupIndex g = 0; g < utility.size(); ++g) {
      normalised[g] = utility[g] / scale;
      worst = std::min(worst, normalised[g]);
    }
    std::vector<detail::Keyed> pool;
    pool.reserve(scores.row(u).size());
    for (const auto& e : scores.row(u)) {
      double own = -std::numeric_limits<double>::infinity();
      for (GroupIndex g : catalog.groups_of(e.item)) own = std::max(own, normalised[g]);
      pool.push_back({e.score + lambda * (worst - own), e.score, e.item});
    }
    slates[u] = detail::take_top(pool, ctx.k());
    detail::credit(ctx, u, slates[u], utility);
    ++round;
  }
  return RankingSlate(ctx.k(), std::move(slates));
}

}  // namespace fairrank::rerank
