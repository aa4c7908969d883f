#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairrank {

using UserIndex = std::uint32_t;
using ItemIndex = std::uint32_t;
using GroupIndex = std::uint32_t;

using AttributeMap = std::map<std::string, std::string>;

struct EntitySpec {
  std::string id;
  AttributeMap attributes;
};

/// Users, items, groups and the membership relations between them.
///
/// Identifiers are stored in lexicographic order, so index order equals id
/// order. Everything that breaks ties "by id" relies on this and compares
/// indices directly.
class Catalog {
 public:
  struct Spec {
    std::vector<EntitySpec> users;
    std::vector<EntitySpec> items;
    std::vector<std::string> groups;
    std::map<std::string, std::vector<std::string>> item_groups;
    std::optional<std::map<std::string, std::string>> user_groups;
  };

  Catalog() = default;
  explicit Catalog(Spec spec);

  std::size_t num_users() const { return users_.size(); }
  std::size_t num_items() const { return items_.size(); }
  std::size_t num_groups() const { return groups_.size(); }

  const std::string& user_id(UserIndex u) const { return users_[u].id; }
  const std::string& item_id(ItemIndex i) const { return items_[i].id; }
  const std::string& group_id(GroupIndex g) const { return groups_[g]; }
  const AttributeMap& user_attributes(UserIndex u) const { return users_[u].attributes; }
  const AttributeMap& item_attributes(ItemIndex i) const { return items_[i].attributes; }

  std::optional<UserIndex> find_user(std::string_view id) const;
  std::optional<ItemIndex> find_item(std::string_view id) const;
  std::optional<GroupIndex> find_group(std::string_view id) const;

  // Throwing lookups (UnknownEntity).
  UserIndex user_index(std::string_view id) const;
  ItemIndex item_index(std::string_view id) const;
  GroupIndex group_index(std::string_view id) const;

  /// Groups of an item, ascending, never empty.
  std::span<const GroupIndex> groups_of(ItemIndex i) const { return item_groups_[i]; }
  std::span<const ItemIndex> items_in(GroupIndex g) const { return group_items_[g]; }

  bool has_user_groups() const { return has_user_groups_; }
  std::optional<GroupIndex> group_of_user(UserIndex u) const;

  /// Items with an identical group set share a signature id.
  std::uint32_t signature(ItemIndex i) const { return item_signature_[i]; }
  std::size_t num_signatures() const { return num_signatures_; }

  /// Rebuilds the construction spec (ids in index order).
  Spec to_spec() const;

  friend bool operator==(const Catalog& a, const Catalog& b);

 private:
  std::vector<EntitySpec> users_;
  std::vector<EntitySpec> items_;
  std::vector<std::string> groups_;
  std::map<std::string, UserIndex, std::less<>> user_lookup_;
  std::map<std::string, ItemIndex, std::less<>> item_lookup_;
  std::map<std::string, GroupIndex, std::less<>> group_lookup_;
  std::vector<std::vector<GroupIndex>> item_groups_;
  std::vector<std::vector<ItemIndex>> group_items_;
  std::vector<std::int64_t> user_group_;  // -1 when absent
  bool has_user_groups_ = false;
  std::vector<std::uint32_t> item_signature_;
  std::size_t num_signatures_ = 0;
};

}  // namespace fairrank
