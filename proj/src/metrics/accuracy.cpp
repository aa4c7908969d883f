#include "fairrank/metrics/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "fairrank/errors.hpp"

namespace fairrank::metrics {

namespace {

double discount(std::size_t rank) { return 1.0 / std::log2(static_cast<double>(rank) + 1.0); }

bool contains(const std::vector<ItemIndex>& sorted, ItemIndex i) {
  return std::binary_search(sorted.begin(), sorted.end(), i);
}

template <typename PerUser>
double average_over_relevant_users(const RankingSlate& slates, const RelevantItems& relevant,
                                   std::size_t k, const char* name, PerUser&& per_user) {
  if (k == 0 || k > slates.k()) {
    throw InvalidArgument(std::string(name) + ": cutoff " + std::to_string(k) +
                          " outside 1.." + std::to_string(slates.k()));
  }
  double sum = 0.0;
  std::size_t users = 0;
  for (UserIndex u = 0; u < relevant.size(); ++u) {
    if (relevant[u].empty()) continue;
    std::span<const ItemIndex> slate;
    if (u < slates.num_users()) slate = slates.slate(u);
    slate = slate.first(std::min(k, slate.size()));
    sum += per_user(slate, relevant[u]);
    ++users;
  }
  if (users == 0) throw UndefinedMetric(std::string(name) + ": no user has relevant items");
  return sum / static_cast<double>(users);
}

}  // namespace

RelevantItems relevant_from_log(const InteractionLog& log, const Catalog& catalog) {
  RelevantItems out(catalog.num_users());
  for (const auto& r : log.records) {
    auto u = catalog.find_user(r.user);
    auto i = catalog.find_item(r.item);
    if (u && i) out[*u].push_back(*i);
  }
  for (auto& items : out) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
  }
  return out;
}

double ndcg_at_k(const RankingSlate& slates, const RelevantItems& relevant, std::size_t k) {
  return average_over_relevant_users(
      slates, relevant, k, "ndcg", [k](std::span<const ItemIndex> slate, const auto& rel) {
        double dcg = 0.0;
        for (std::size_t r = 0; r < slate.size(); ++r) {
          if (contains(rel, slate[r])) dcg += discount(r + 1);
        }
        double ideal = 0.0;
        for (std::size_t r = 0; r < std::min(k, rel.size()); ++r) ideal += discount(r + 1);
        return dcg / ideal;
      });
}

double mrr_at_k(const RankingSlate& slates, const RelevantItems& relevant, std::size_t k) {
  return average_over_relevant_users(
      slates, relevant, k, "mrr", [](std::span<const ItemIndex> slate, const auto& rel) {
        for (std::size_t r = 0; r < slate.size(); ++r) {
          if (contains(rel, slate[r])) return 1.0 / static_cast<double>(r + 1);
        }
        return 0.0;
      });
}

double hit_at_k(const RankingSlate& slates, const RelevantItems& relevant, std::size_t k) {
  return average_over_relevant_users(
      slates, relevant, k, "hr", [](std::span<const ItemIndex> slate, const auto& rel) {
        for (ItemIndex i : slate) {
          if (contains(rel, i)) return 1.0;
        }
        return 0.0;
      });
}

RerankQuality rerank_quality(const RankingSlate& new_slates, const ScoreMatrix& original,
                             std::size_t k) {
  if (k == 0) throw InvalidArgument("rerank_quality: cutoff must be positive");
  double ndcg_sum = 0.0;
  double loss_sum = 0.0;
  std::size_t users = 0;
  for (UserIndex u = 0; u < original.num_users(); ++u) {
    const auto ranked = original.ranked_row(u);
    const std::size_t depth = std::min(k, ranked.size());
    double ideal_dcg = 0.0;
    double ideal_mass = 0.0;
    for (std::size_t r = 0; r < depth; ++r) {
      ideal_dcg += ranked[r].score * discount(r + 1);
      ideal_mass += ranked[r].score;
    }

    double dcg = 0.0;
    double mass = 0.0;
    if (u < new_slates.num_users()) {
      auto slate = new_slates.slate(u);
      for (std::size_t r = 0; r < std::min(k, slate.size()); ++r) {
        auto s = original.score(u, slate[r]);
        if (!s) throw InvalidArgument("rerank_quality: re-ranked item has no original score");
        dcg += *s * discount(r + 1);
        mass += *s;
      }
    }
    if (!(ideal_mass > 0.0) || !(ideal_dcg > 0.0)) continue;
    ndcg_sum += dcg / ideal_dcg;
    loss_sum += 1.0 - mass / ideal_mass;
    ++users;
  }
  if (users == 0) throw UndefinedMetric("rerank_quality: original top-k mass is zero for every user");
  return {ndcg_sum / static_cast<double>(users), loss_sum / static_cast<double>(users)};
}

}  // namespace fairrank::metrics
