#include "fairrank/core/score_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "fairrank/errors.hpp"

namespace fairrank {

ScoreMatrix::ScoreMatrix(const Catalog& catalog, std::vector<std::vector<ScoredItem>> rows,
                         ScoreSemantics semantics)
    : rows_(std::move(rows)), semantics_(semantics) {
  if (rows_.size() != catalog.num_users()) {
    throw InvariantViolation("score matrix has " + std::to_string(rows_.size()) +
                             " rows for " + std::to_string(catalog.num_users()) + " users");
  }
  for (UserIndex u = 0; u < rows_.size(); ++u) {
    auto& row = rows_[u];
    std::sort(row.begin(), row.end(),
              [](const ScoredItem& a, const ScoredItem& b) { return a.item < b.item; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      const auto& e = row[k];
      if (e.item >= catalog.num_items()) {
        throw UnknownEntity("score row of user '" + catalog.user_id(u) +
                            "' references an item outside the catalog");
      }
      if (!std::isfinite(e.score)) {
        throw InvariantViolation("non-finite score for (" + catalog.user_id(u) + ", " +
                                 catalog.item_id(e.item) + ")");
      }
      if (semantics_ == ScoreSemantics::probability && (e.score < 0.0 || e.score > 1.0)) {
        throw InvariantViolation("probability score outside [0,1] for (" + catalog.user_id(u) +
                                 ", " + catalog.item_id(e.item) + ")");
      }
      if (k > 0 && row[k - 1].item == e.item) {
        throw InvariantViolation("duplicate item '" + catalog.item_id(e.item) +
                                 "' in score row of user '" + catalog.user_id(u) + "'");
      }
    }
  }
}

std::optional<double> ScoreMatrix::score(UserIndex u, ItemIndex i) const {
  const auto& row = rows_[u];
  auto it = std::lower_bound(row.begin(), row.end(), i,
                             [](const ScoredItem& e, ItemIndex item) { return e.item < item; });
  if (it == row.end() || it->item != i) return std::nullopt;
  return it->score;
}

std::vector<ScoredItem> ScoreMatrix::ranked_row(UserIndex u) const {
  std::vector<ScoredItem> out(rows_[u].begin(), rows_[u].end());
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

}  // namespace fairrank
