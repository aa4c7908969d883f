#include "fairrank/core/catalog.hpp"

#include <algorithm>

#include "fairrank/errors.hpp"

namespace fairrank {

namespace {

template <typename Index>
void build_lookup(const std::vector<std::string>& ids,
                  std::map<std::string, Index, std::less<>>& lookup,
                  const char* what) {
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!lookup.emplace(ids[k], static_cast<Index>(k)).second) {
      throw InvariantViolation(std::string("duplicate ") + what + " id '" + ids[k] + "'");
    }
  }
}

std::vector<std::string> ids_of(const std::vector<EntitySpec>& entities) {
  std::vector<std::string> ids;
  ids.reserve(entities.size());
  for (const auto& e : entities) ids.push_back(e.id);
  return ids;
}

template <typename Map>
std::optional<std::uint32_t> lookup(const Map& map, std::string_view id) {
  auto it = map.find(id);
  if (it == map.end()) return std::nullopt;
  return it->second;
}

}  // namespace

Catalog::Catalog(Spec spec) {
  if (spec.groups.empty()) throw InvariantViolation("catalog declares no groups");

  auto by_id = [](const EntitySpec& a, const EntitySpec& b) { return a.id < b.id; };
  users_ = std::move(spec.users);
  items_ = std::move(spec.items);
  groups_ = std::move(spec.groups);
  std::sort(users_.begin(), users_.end(), by_id);
  std::sort(items_.begin(), items_.end(), by_id);
  std::sort(groups_.begin(), groups_.end());

  build_lookup(ids_of(users_), user_lookup_, "user");
  build_lookup(ids_of(items_), item_lookup_, "item");
  build_lookup(groups_, group_lookup_, "group");

  item_groups_.assign(items_.size(), {});
  group_items_.assign(groups_.size(), {});
  for (const auto& [item, groups] : spec.item_groups) {
    auto i = find_item(item);
    if (!i) throw UnknownEntity("item '" + item + "' in group membership is not in the catalog");
    auto& members = item_groups_[*i];
    for (const auto& g : groups) {
      auto gi = find_group(g);
      if (!gi) throw InvariantViolation("item '" + item + "' references undeclared group '" + g + "'");
      members.push_back(*gi);
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  for (ItemIndex i = 0; i < items_.size(); ++i) {
    if (item_groups_[i].empty()) {
      throw InvariantViolation("item '" + items_[i].id + "' belongs to no group");
    }
    for (GroupIndex g : item_groups_[i]) group_items_[g].push_back(i);
  }

  user_group_.assign(users_.size(), -1);
  if (spec.user_groups) {
    has_user_groups_ = true;
    for (const auto& [user, group] : *spec.user_groups) {
      auto u = find_user(user);
      if (!u) throw UnknownEntity("user '" + user + "' in user groups is not in the catalog");
      auto g = find_group(group);
      if (!g) throw InvariantViolation("user '" + user + "' references undeclared group '" + group + "'");
      user_group_[*u] = *g;
    }
  }

  std::map<std::vector<GroupIndex>, std::uint32_t> signatures;
  item_signature_.resize(items_.size());
  for (ItemIndex i = 0; i < items_.size(); ++i) {
    auto [it, inserted] =
        signatures.emplace(item_groups_[i], static_cast<std::uint32_t>(signatures.size()));
    item_signature_[i] = it->second;
  }
  num_signatures_ = signatures.size();
}

std::optional<UserIndex> Catalog::find_user(std::string_view id) const {
  return lookup(user_lookup_, id);
}
std::optional<ItemIndex> Catalog::find_item(std::string_view id) const {
  return lookup(item_lookup_, id);
}
std::optional<GroupIndex> Catalog::find_group(std::string_view id) const {
  return lookup(group_lookup_, id);
}

UserIndex Catalog::user_index(std::string_view id) const {
  if (auto u = find_user(id)) return *u;
  throw UnknownEntity("unknown user '" + std::string(id) + "'");
}
ItemIndex Catalog::item_index(std::string_view id) const {
  if (auto i = find_item(id)) return *i;
  throw UnknownEntity("unknown item '" + std::string(id) + "'");
}
GroupIndex Catalog::group_index(std::string_view id) const {
  if (auto g = find_group(id)) return *g;
  throw UnknownEntity("unknown group '" + std::string(id) + "'");
}

std::optional<GroupIndex> Catalog::group_of_user(UserIndex u) const {
  if (user_group_[u] < 0) return std::nullopt;
  return static_cast<GroupIndex>(user_group_[u]);
}

Catalog::Spec Catalog::to_spec() const {
  Spec spec;
  spec.users = users_;
  spec.items = items_;
  spec.groups = groups_;
  for (ItemIndex i = 0; i < items_.size(); ++i) {
    auto& groups = spec.item_groups[items_[i].id];
    for (GroupIndex g : item_groups_[i]) groups.push_back(groups_[g]);
  }
  if (has_user_groups_) {
    spec.user_groups.emplace();
    for (UserIndex u = 0; u < users_.size(); ++u) {
      if (user_group_[u] >= 0) (*spec.user_groups)[users_[u].id] = groups_[user_group_[u]];
    }
  }
  return spec;
}

bool operator==(const Catalog& a, const Catalog& b) {
  auto same_entities = [](const std::vector<EntitySpec>& x, const std::vector<EntitySpec>& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                      [](const EntitySpec& l, const EntitySpec& r) {
                        return l.id == r.id && l.attributes == r.attributes;
                      });
  };
  return same_entities(a.users_, b.users_) && same_entities(a.items_, b.items_) &&
         a.groups_ == b.groups_ && a.item_groups_ == b.item_groups_ &&
         a.has_user_groups_ == b.has_user_groups_ && a.user_group_ == b.user_group_;
}

}  // namespace fairrank
