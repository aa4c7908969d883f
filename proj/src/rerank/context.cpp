#include "fairrank/rerank/context.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fairrank/errors.hpp"

namespace fairrank::rerank {

RerankContext::RerankContext(const ScoreMatrix& scores, const Catalog& catalog, std::size_t k,
                             UtilityMode mode)
    : scores_(&scores), catalog_(&catalog), k_(k), mode_(mode) {
  if (k == 0) throw InvalidArgument("re-ranking needs K > 0");
  if (scores.num_users() != catalog.num_users()) {
    throw InvalidArgument("score matrix and catalog disagree on the number of users");
  }
  arrival_order_.resize(catalog.num_users());
  std::iota(arrival_order_.begin(), arrival_order_.end(), UserIndex{0});
  target_shares_ = uniform_shares(catalog.num_groups());
}

void RerankContext::set_arrival_order(std::vector<UserIndex> order) {
  std::vector<bool> seen(catalog_->num_users(), false);
  if (order.size() != seen.size()) throw InvalidArgument("arrival order must list every user once");
  for (UserIndex u : order) {
    if (u >= seen.size() || seen[u]) throw InvalidArgument("arrival order must list every user once");
    seen[u] = true;
  }
  arrival_order_ = std::move(order);
}

void RerankContext::set_target_shares(std::vector<double> shares) {
  if (shares.size() != catalog_->num_groups()) throw InvalidArgument("one target share per group");
  double sum = 0.0;
  for (double s : shares) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("target shares must be >= 0");
    sum += s;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("target shares must sum to 1");
  target_shares_ = std::move(shares);
}

std::vector<double> uniform_shares(std::size_t num_groups) {
  return std::vector<double>(num_groups, 1.0 / static_cast<double>(num_groups));
}

std::vector<double> proportional_shares(const Catalog& catalog) {
  std::vector<double> shares(catalog.num_groups());
  double total = 0.0;
  for (GroupIndex g = 0; g < catalog.num_groups(); ++g) {
    shares[g] = static_cast<double>(catalog.items_in(g).size());
    total += shares[g];
  }
  if (total == 0.0) return uniform_shares(catalog.num_groups());
  for (double& s : shares) s /= total;
  return shares;
}

std::vector<UserIndex> shuffled_arrival(std::size_t num_users, std::uint64_t seed) {
  std::vector<UserIndex> order(num_users);
  std::iota(order.begin(), order.end(), UserIndex{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace fairrank::rerank
