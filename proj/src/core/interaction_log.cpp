#include "fairrank/core/interaction_log.hpp"

#include <algorithm>
#include <cmath>

#include "fairrank/errors.hpp"

namespace fairrank {

std::map<std::string, std::vector<Interaction>> InteractionLog::chronological_by_user() const {
  std::map<std::string, std::vector<Interaction>> out;
  for (const auto& r : records) out[r.user].push_back(r);
  for (auto& [user, list] : out) {
    std::stable_sort(list.begin(), list.end(), [](const Interaction& a, const Interaction& b) {
      return a.timestamp < b.timestamp;
    });
  }
  return out;
}

void InteractionLog::validate_against(const Catalog& catalog) const {
  for (const auto& r : records) {
    if (!catalog.find_user(r.user)) throw UnknownEntity("unknown user '" + r.user + "'");
    if (!catalog.find_item(r.item)) throw UnknownEntity("unknown item '" + r.item + "'");
    if (!std::isfinite(r.label) || r.label < 0.0 || r.label > 5.0) {
      throw InvariantViolation("label out of range for (" + r.user + ", " + r.item + ")");
    }
  }
}

}  // namespace fairrank
