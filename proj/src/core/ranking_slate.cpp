#include "fairrank/core/ranking_slate.hpp"

#include <algorithm>
#include <string>

#include "fairrank/errors.hpp"

namespace fairrank {

RankingSlate::RankingSlate(std::size_t k, std::vector<std::vector<ItemIndex>> slates)
    : k_(k), slates_(std::move(slates)) {
  if (k_ == 0) throw InvalidArgument("slate size K must be positive");
  for (std::size_t u = 0; u < slates_.size(); ++u) {
    const auto& s = slates_[u];
    if (s.size() > k_) {
      throw InvariantViolation("slate of user " + std::to_string(u) + " has " +
                               std::to_string(s.size()) + " items for K=" + std::to_string(k_));
    }
    std::vector<ItemIndex> sorted(s);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvariantViolation("slate of user " + std::to_string(u) + " repeats an item");
    }
  }
}

void RankingSlate::validate_against(const ScoreMatrix& scores) const {
  if (scores.num_users() != slates_.size()) {
    throw InvariantViolation("slate and score matrix disagree on the number of users");
  }
  for (UserIndex u = 0; u < slates_.size(); ++u) {
    const auto& s = slates_[u];
    const std::size_t expected = std::min(k_, scores.row(u).size());
    if (s.size() != expected) {
      throw InvariantViolation("slate of user " + std::to_string(u) + " has length " +
                               std::to_string(s.size()) + ", expected " +
                               std::to_string(expected));
    }
    for (ItemIndex i : s) {
      if (!scores.score(u, i)) {
        throw InvariantViolation("slate of user " + std::to_string(u) +
                                 " contains a non-candidate item");
      }
    }
  }
}

}  // namespace fairrank
