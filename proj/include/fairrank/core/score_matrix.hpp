#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fairrank/core/catalog.hpp"

namespace fairrank {

enum class ScoreSemantics { raw, probability };

struct ScoredItem {
  ItemIndex item;
  double score;

  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

/// Sparse per-user candidate scores. Rows are stored sorted by item index.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;

  /// `rows` must have one entry per catalog user. Throws InvariantViolation
  /// on non-finite scores, out-of-range probabilities or duplicate items,
  /// UnknownEntity on an item index outside the catalog.
  ScoreMatrix(const Catalog& catalog, std::vector<std::vector<ScoredItem>> rows,
              ScoreSemantics semantics);

  std::size_t num_users() const { return rows_.size(); }
  ScoreSemantics semantics() const { return semantics_; }
  std::span<const ScoredItem> row(UserIndex u) const { return rows_[u]; }
  std::optional<double> score(UserIndex u, ItemIndex i) const;

  /// Row ordered by score descending, item index ascending on ties.
  std::vector<ScoredItem> ranked_row(UserIndex u) const;

  friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;

 private:
  std::vector<std::vector<ScoredItem>> rows_;
  ScoreSemantics semantics_ = ScoreSemantics::raw;
};

/// Strict weak order used for every "score desc, id asc" tie rule.
inline bool ranks_before(const ScoredItem& a, const ScoredItem& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.item < b.item;
}

}  // namespace fairrank
