#pragma once

#include <cstdint>
#include <vector>

#include "fairrank/core/catalog.hpp"
#include "fairrank/core/group_utility.hpp"
#include "fairrank/core/score_matrix.hpp"

namespace fairrank::rerank {

/// Inputs shared by every fairness re-ranker. Holds references: the score
/// matrix and catalog must outlive the context and are never modified.
class RerankContext {
 public:
  /// Arrival order defaults to user-index order and target shares to uniform.
  /// Throws InvalidArgument for k == 0 or mismatched scores/catalog.
  RerankContext(const ScoreMatrix& scores, const Catalog& catalog, std::size_t k,
                UtilityMode mode = UtilityMode::exposure);

  const ScoreMatrix& scores() const { return *scores_; }
  const Catalog& catalog() const { return *catalog_; }
  std::size_t k() const { return k_; }
  UtilityMode mode() const { return mode_; }
  const std::vector<UserIndex>& arrival_order() const { return arrival_order_; }
  const std::vector<double>& target_shares() const { return target_shares_; }

  /// Throws InvalidArgument unless `order` is a permutation of the users.
  void set_arrival_order(std::vector<UserIndex> order);
  /// Throws InvalidArgument unless shares are >= 0, one per group, sum 1.
  void set_target_shares(std::vector<double> shares);

 private:
  const ScoreMatrix* scores_;
  const Catalog* catalog_;
  std::size_t k_;
  UtilityMode mode_;
  std::vector<UserIndex> arrival_order_;
  std::vector<double> target_shares_;
};

std::vector<double> uniform_shares(std::size_t num_groups);

/// Shares proportional to the number of catalog items in each group.
std::vector<double> proportional_shares(const Catalog& catalog);

/// Seeded permutation of 0..n-1.
std::vector<UserIndex> shuffled_arrival(std::size_t num_users, std::uint64_t seed);

}  // namespace fairrank::rerank
