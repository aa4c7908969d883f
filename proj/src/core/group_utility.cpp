#include "fairrank/core/group_utility.hpp"

#include <algorithm>
#include <string>

#include "fairrank/errors.hpp"

namespace fairrank {

std::string_view to_string(UtilityAxis axis) {
  return axis == UtilityAxis::item ? "item" : "user";
}

std::string_view to_string(UtilityMode mode) {
  return mode == UtilityMode::exposure ? "exposure" : "click";
}

UtilityAxis parse_axis(std::string_view text) {
  if (text == "item") return UtilityAxis::item;
  if (text == "user") return UtilityAxis::user;
  throw InvalidArgument("unknown utility axis '" + std::string(text) + "'");
}

UtilityMode parse_mode(std::string_view text) {
  if (text == "exposure") return UtilityMode::exposure;
  if (text == "click") return UtilityMode::click;
  throw InvalidArgument("unknown utility mode '" + std::string(text) + "'");
}

double GroupUtilityVector::total() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

double slot_weight(UtilityMode mode, double score) {
  if (mode == UtilityMode::exposure) return 1.0;
  return std::clamp(score, 0.0, 1.0);
}

GroupUtilityVector group_utility(const RankingSlate& slates, const ScoreMatrix& scores,
                                 const Catalog& catalog, UtilityAxis axis, UtilityMode mode) {
  if (axis == UtilityAxis::user && !catalog.has_user_groups()) {
    throw MissingUserGroups("user-axis utility needs user group membership");
  }
  GroupUtilityVector out{axis, mode, std::vector<double>(catalog.num_groups(), 0.0)};

  for (UserIndex u = 0; u < slates.num_users(); ++u) {
    std::optional<GroupIndex> user_group;
    if (axis == UtilityAxis::user) {
      user_group = catalog.group_of_user(u);
      if (!user_group) continue;
    }
    for (ItemIndex i : slates.slate(u)) {
      if (i >= catalog.num_items()) throw UnknownEntity("slate item outside the catalog");
      double w = 1.0;
      if (mode == UtilityMode::click) {
        auto s = u < scores.num_users() ? scores.score(u, i) : std::nullopt;
        if (!s) {
          throw UnknownEntity("no score for (" + catalog.user_id(u) + ", " + catalog.item_id(i) +
                              ") in click mode");
        }
        w = slot_weight(mode, *s);
      }
      if (axis == UtilityAxis::item) {
        for (GroupIndex g : catalog.groups_of(i)) out.values[g] += w;
      } else {
        out.values[*user_group] += w;
      }
    }
  }
  return out;
}

double utility_evenness_gap(const GroupUtilityVector& v) {
  if (v.values.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(v.values.begin(), v.values.end());
  return *hi - *lo;
}

}  // namespace fairrank
