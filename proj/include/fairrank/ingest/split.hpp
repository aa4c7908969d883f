#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairrank/core/catalog.hpp"
#include "fairrank/core/interaction_log.hpp"

namespace fairrank::ingest {

struct SplitSpec {
  std::size_t min_interactions = 5;
  std::array<double, 3> ratios{0.8, 0.1, 0.1};  // train, valid, test

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

/// Side information the catalog is rebuilt from after filtering.
struct GroupMembership {
  std::map<std::string, std::vector<std::string>> item_groups;
  std::optional<std::map<std::string, std::string>> user_groups;
};

struct SplitDataset {
  InteractionLog train;
  InteractionLog valid;
  InteractionLog test;
  Catalog catalog;
  SplitSpec split_spec;

  std::size_t total_records() const { return train.size() + valid.size() + test.size(); }

  friend bool operator==(const SplitDataset&, const SplitDataset&) = default;
};

/// Drops users with fewer than `spec.min_interactions` records, then splits
/// each remaining user's chronological history at floor(n * r_train) and
/// floor(n * (r_train + r_valid)). Ties in time keep file order.
///
/// The catalog holds the retained users and items; its group list is every
/// group named by `membership`, so filtering never removes a group.
///
/// Throws InvalidArgument for bad ratios, UnknownEntity for a retained item
/// without group membership, EmptyDataset when nothing survives filtering.
SplitDataset filter_and_split(const InteractionLog& log, const GroupMembership& membership,
                              const SplitSpec& spec = {});

}  // namespace fairrank::ingest
