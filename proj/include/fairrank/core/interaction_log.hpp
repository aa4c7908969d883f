#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fairrank/core/catalog.hpp"

namespace fairrank {

struct Interaction {
  std::string user;
  std::string item;
  double label = 1.0;
  std::int64_t timestamp = 0;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

/// Interaction records in file order. Labels are ratings in [0, 5] or
/// binary clicks; both are accepted.
struct InteractionLog {
  std::vector<Interaction> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  /// Per-user records sorted by timestamp; equal timestamps keep file order.
  std::map<std::string, std::vector<Interaction>> chronological_by_user() const;

  /// Throws UnknownEntity for a record whose user or item is not in `catalog`,
  /// InvariantViolation for a label outside [0, 5].
  void validate_against(const Catalog& catalog) const;

  friend bool operator==(const InteractionLog&, const InteractionLog&) = default;
};

}  // namespace fairrank
