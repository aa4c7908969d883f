#include <cmath>

#include "detail.hpp"
#include "fairrank/rerank/rerankers.hpp"

namespace fairrank::rerank {

FairRecOutcome fairrec(const RerankContext& ctx, double phi) {
  if (!(phi > 0.0 && phi <= 1.0)) throw InvalidArgument("fairrec: phi must be in (0, 1]");
  detail::require_candidates(ctx);
  const auto& scores = ctx.scores();
  const auto& catalog = ctx.catalog();
  const std::size_t num_users = scores.num_users();
  const double slots = static_cast<double>(ctx.k()) * static_cast<double>(num_users);
  const auto guarantee =
      static_cast<std::size_t>(std::floor(phi * slots / static_cast<double>(catalog.num_groups())));

  std::vector<std::vector<ScoredItem>> ranked(num_users);
  std::vector<std::size_t> capacity(num_users);
  for (UserIndex u = 0; u < num_users; ++u) {
    ranked[u] = scores.ranked_row(u);
    capacity[u] = std::min(ctx.k(), ranked[u].size());
  }
  std::vector<std::vector<ItemIndex>> slates(num_users);
  std::vector<std::vector<bool>> used(num_users);
  std::vector<std::size_t> exposure(catalog.num_groups(), 0);
  std::size_t below = guarantee > 0 ? catalog.num_groups() : 0;

  auto take = [&](UserIndex u, std::size_t pos) {
    const ItemIndex item = ranked[u][pos].item;
    slates[u].push_back(item);
    used[u][pos] = true;
    for (GroupIndex g : catalog.groups_of(item)) {
      if (++exposure[g] == guarantee) --below;
    }
  };
  for (UserIndex u = 0; u < num_users; ++u) used[u].assign(ranked[u].size(), false);

  // Phase 1. Groups only ever leave the below-guarantee set, so an item
  // skipped once stays ineligible and each user's cursor only moves forward.
  std::vector<std::size_t> cursor(num_users, 0);
  bool progress = true;
  while (below > 0 && progress) {
    progress = false;
    for (UserIndex u : ctx.arrival_order()) {
      if (below == 0) break;
      if (slates[u].size() >= capacity[u]) continue;
      auto& c = cursor[u];
      while (c < ranked[u].size()) {
        bool eligible = false;
        for (GroupIndex g : catalog.groups_of(ranked[u][c].item)) eligible |= exposure[g] < guarantee;
        if (eligible) break;
        ++c;
      }
      if (c == ranked[u].size()) continue;
      take(u, c++);
      progress = true;
    }
  }

  // Phase 2.
  for (UserIndex u = 0; u < num_users; ++u) {
    for (std::size_t pos = 0; pos < ranked[u].size() && slates[u].size() < capacity[u]; ++pos) {
      if (!used[u][pos]) take(u, pos);
    }
    detail::sort_by_score(scores, u, slates[u]);
  }

  FairRecOutcome out{RankingSlate(ctx.k(), std::move(slates)), guarantee, 0.0};
  out.achieved_min = static_cast<double>(*std::min_element(exposure.begin(), exposure.end()));
  return out;
}

}  // namespace fairrank::rerank
