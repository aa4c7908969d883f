#pragma once

#include <string_view>
#include <vector>

#include "fairrank/core/catalog.hpp"
#include "fairrank/core/ranking_slate.hpp"
#include "fairrank/core/score_matrix.hpp"

namespace fairrank {

enum class UtilityAxis { item, user };

/// exposure: every slate slot is worth 1. click: the slot is worth the
/// clamped click probability of the (user, item) pair.
enum class UtilityMode { exposure, click };

std::string_view to_string(UtilityAxis axis);
std::string_view to_string(UtilityMode mode);
UtilityAxis parse_axis(std::string_view text);
UtilityMode parse_mode(std::string_view text);

/// Utility per group, indexed by group index.
struct GroupUtilityVector {
  UtilityAxis axis = UtilityAxis::item;
  UtilityMode mode = UtilityMode::exposure;
  std::vector<double> values;

  /// Sum of values in group order.
  double total() const;
};

/// Weight of one slate slot under `mode`.
double slot_weight(UtilityMode mode, double score);

/// Accumulates slate utility per group.
///
/// Item axis credits every group of a slate item with the full slot weight;
/// user axis credits the user's group with the weight of the whole slate.
/// Sums are taken in user order per group so results are bit-reproducible.
///
/// Throws MissingUserGroups for the user axis on a catalog without user
/// groups and UnknownEntity when click mode needs a score that is missing.
GroupUtilityVector group_utility(const RankingSlate& slates, const ScoreMatrix& scores,
                                 const Catalog& catalog, UtilityAxis axis, UtilityMode mode);

/// max_g v_g - min_g v_g.
double utility_evenness_gap(const GroupUtilityVector& v);

}  // namespace fairrank
