#pragma once

#include <algorithm>
#include <vector>

#include "fairrank/errors.hpp"
#include "fairrank/rerank/context.hpp"

namespace fairrank::rerank::detail {

struct Keyed {
  double key;
  double score;
  ItemIndex item;
};

inline bool keyed_before(const Keyed& a, const Keyed& b) {
  if (a.key != b.key) return a.key > b.key;
  if (a.score != b.score) return a.score > b.score;
  return a.item < b.item;
}

/// Items of the best min(k, n) entries, in rank order. Reorders `pool`.
inline std::vector<ItemIndex> take_top(std::vector<Keyed>& pool, std::size_t k) {
  const std::size_t n = std::min(k, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n), pool.end(),
                    keyed_before);
  std::vector<ItemIndex> out(n);
  for (std::size_t r = 0; r < n; ++r) out[r] = pool[r].item;
  return out;
}

inline void require_candidates(const RerankContext& ctx) {
  for (UserIndex u = 0; u < ctx.scores().num_users(); ++u) {
    if (ctx.scores().row(u).empty()) {
      throw EmptyCandidates("user '" + ctx.catalog().user_id(u) + "' has no candidates");
    }
  }
}

/// Adds the slot weight of every slate item to each of its groups.
inline void credit(const RerankContext& ctx, UserIndex u, const std::vector<ItemIndex>& slate,
                   std::vector<double>& utility) {
  for (ItemIndex i : slate) {
    double w = 1.0;
    if (ctx.mode() == UtilityMode::click) w = slot_weight(ctx.mode(), *ctx.scores().score(u, i));
    for (GroupIndex g : ctx.catalog().groups_of(i)) utility[g] += w;
  }
}

inline void sort_by_score(const ScoreMatrix& scores, UserIndex u, std::vector<ItemIndex>& slate) {
  std::sort(slate.begin(), slate.end(), [&](ItemIndex a, ItemIndex b) {
    return ranks_before({a, *scores.score(u, a)}, {b, *scores.score(u, b)});
  });
}

}  // namespace fairrank::rerank::detail
