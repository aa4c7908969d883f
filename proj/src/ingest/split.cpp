#include "fairrank/ingest/split.hpp"

#include <cmath>
#include <set>

#include "fairrank/errors.hpp"

namespace fairrank::ingest {

namespace {

void check_ratios(const SplitSpec& spec) {
  double sum = 0.0;
  for (double r : spec.ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("split ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("split ratios must sum to 1");
}

std::size_t cut(std::size_t n, double fraction) {
  // the epsilon keeps 10 * 0.9 from flooring to 8 through representation error
  return std::min(n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9)));
}

}  // namespace

SplitDataset filter_and_split(const InteractionLog& log, const GroupMembership& membership,
                              const SplitSpec& spec) {
  check_ratios(spec);

  SplitDataset out;
  out.split_spec = spec;
  std::set<std::string> items;
  std::vector<std::string> users;

  for (const auto& [user, history] : log.chronological_by_user()) {
    const std::size_t n = history.size();
    if (n < spec.min_interactions) continue;
    users.push_back(user);
    const std::size_t train_end = cut(n, spec.ratios[0]);
    const std::size_t valid_end = std::max(train_end, cut(n, spec.ratios[0] + spec.ratios[1]));
    for (std::size_t k = 0; k < n; ++k) {
      items.insert(history[k].item);
      auto& target = k < train_end ? out.train : (k < valid_end ? out.valid : out.test);
      target.records.push_back(history[k]);
    }
  }
  if (users.empty()) throw EmptyDataset("no user has at least " +
                                        std::to_string(spec.min_interactions) + " interactions");

  std::set<std::string> groups;
  for (const auto& [item, gs] : membership.item_groups) groups.insert(gs.begin(), gs.end());
  if (membership.user_groups) {
    for (const auto& [user, g] : *membership.user_groups) groups.insert(g);
  }

  Catalog::Spec cat;
  for (const auto& u : users) cat.users.push_back({u, {}});
  for (const auto& i : items) {
    auto it = membership.item_groups.find(i);
    if (it == membership.item_groups.end() || it->second.empty()) {
      throw UnknownEntity("item '" + i + "' has no group membership");
    }
    cat.items.push_back({i, {}});
    cat.item_groups[i] = it->second;
  }
  cat.groups.assign(groups.begin(), groups.end());
  if (membership.user_groups) {
    cat.user_groups.emplace();
    for (const auto& u : users) {
      auto it = membership.user_groups->find(u);
      if (it != membership.user_groups->end()) (*cat.user_groups)[u] = it->second;
    }
  }
  out.catalog = Catalog(std::move(cat));
  return out;
}

}  // namespace fairrank::ingest
