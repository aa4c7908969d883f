#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fairrank/core/catalog.hpp"
#include "fairrank/core/score_matrix.hpp"

namespace fairrank {

/// Per-user ordered top-K lists, indexed by user index.
class RankingSlate {
 public:
  RankingSlate() = default;

  /// Throws InvalidArgument for k == 0 and InvariantViolation for a slate
  /// longer than k or containing a duplicate item.
  RankingSlate(std::size_t k, std::vector<std::vector<ItemIndex>> slates);

  std::size_t k() const { return k_; }
  std::size_t num_users() const { return slates_.size(); }
  std::span<const ItemIndex> slate(UserIndex u) const { return slates_[u]; }
  const std::vector<std::vector<ItemIndex>>& slates() const { return slates_; }

  /// Checks every slate is full (length k) whenever its user has at least k
  /// candidates, and that every item is one of the user's candidates.
  void validate_against(const ScoreMatrix& scores) const;

  friend bool operator==(const RankingSlate&, const RankingSlate&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::vector<ItemIndex>> slates_;
};

}  // namespace fairrank
