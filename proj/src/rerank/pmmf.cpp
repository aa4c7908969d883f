#include "detail.hpp"
#include "fairrank/rerank/rerankers.hpp"

namespace fairrank::rerank {

PmmfOutcome pmmf(const RerankContext& ctx, const PmmfParams& params, const DualObserver& observer) {
  if (!(params.lambda >= 0.0)) throw InvalidArgument("pmmf: lambda must be >= 0");
  if (!(params.eta > 0.0)) throw InvalidArgument("pmmf: eta must be > 0");
  detail::require_candidates(ctx);
  const auto& scores = ctx.scores();
  const auto& catalog = ctx.catalog();
  const auto& shares = ctx.target_shares();
  const auto k = static_cast<double>(ctx.k());

  DualState state(catalog.num_groups(), params.lambda, params.eta);
  std::vector<std::vector<ItemIndex>> slates(scores.num_users());
  std::vector<double> exposure(catalog.num_groups());
  std::vector<double> log_factors(catalog.num_groups());

  for (UserIndex u : ctx.arrival_order()) {
    std::vector<detail::Keyed> pool;
    pool.reserve(scores.row(u).size());
    for (const auto& e : scores.row(u)) {
      double price = 0.0;
      for (GroupIndex g : catalog.groups_of(e.item)) price += state.price(g);
      pool.push_back({e.score - price, e.score, e.item});
    }
    slates[u] = detail::take_top(pool, ctx.k());

    std::fill(exposure.begin(), exposure.end(), 0.0);
    detail::credit(ctx, u, slates[u], exposure);
    for (GroupIndex g = 0; g < exposure.size(); ++g) {
      log_factors[g] = -params.eta * (shares[g] * k - exposure[g]);
    }
    state.multiplicative_update(log_factors);
    if (observer) observer(u, state);
  }
  return PmmfOutcome{RankingSlate(ctx.k(), std::move(slates)), std::move(state)};
}

}  // namespace fairrank::rerank
