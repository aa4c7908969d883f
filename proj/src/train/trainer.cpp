#include "fairrank/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "fairrank/errors.hpp"

namespace fairrank::train {

WeightProvider parse_weight_provider(std::string_view name) {
  if (name == "static") return WeightProvider::static_weight;
  if (name == "ips") return WeightProvider::ips;
  if (name == "fairdual") return WeightProvider::fairdual;
  throw InvalidArgument("unknown weight provider '" + std::string(name) + "'");
}

GroupSampler parse_group_sampler(std::string_view name) {
  if (name == "uniform") return GroupSampler::uniform;
  if (name == "minmax") return GroupSampler::minmax;
  throw InvalidArgument("unknown group sampler '" + std::string(name) + "'");
}

std::string to_string(WeightProvider w) {
  switch (w) {
    case WeightProvider::static_weight: return "static";
    case WeightProvider::ips: return "ips";
    case WeightProvider::fairdual: return "fairdual";
  }
  return "static";
}

std::string to_string(GroupSampler s) { return s == GroupSampler::uniform ? "uniform" : "minmax"; }

std::string TrainHooks::describe() const {
  return to_string(weights) + "," + to_string(sampler) + "," + to_string(regularizer);
}

namespace {

struct Positive {
  UserIndex user;
  ItemIndex item;
};

struct Prepared {
  std::vector<Positive> positives;
  std::vector<std::vector<ItemIndex>> seen;  // sorted, per user
};

Prepared prepare(const ingest::SplitDataset& data, const TrainConfig& config) {
  if (config.batch_size == 0) throw InvalidArgument("batch size must be > 0");
  if (!(config.learning_rate > 0.0)) throw InvalidArgument("learning rate must be > 0");
  if (!(config.l2 >= 0.0)) throw InvalidArgument("l2 weight must be >= 0");
  const Catalog& catalog = data.catalog;
  Prepared p;
  p.seen.resize(catalog.num_users());
  for (const auto& r : data.train.records) {
    if (!(r.label > 0.0)) continue;
    const Positive pos{catalog.user_index(r.user), catalog.item_index(r.item)};
    p.positives.push_back(pos);
    p.seen[pos.user].push_back(pos.item);
  }
  if (p.positives.empty()) throw EmptyDataset("train split has no positive interactions");
  for (auto& s : p.seen) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return p;
}

// Uniform negative, redrawn on collision. False when the user has seen everything.
bool draw_negative(std::mt19937_64& rng, const std::vector<ItemIndex>& seen, std::size_t num_items,
                   ItemIndex& out) {
  if (seen.size() >= num_items) return false;
  std::uniform_int_distribution<ItemIndex> pick(0, static_cast<ItemIndex>(num_items - 1));
  do {
    out = pick(rng);
  } while (std::binary_search(seen.begin(), seen.end(), out));
  return true;
}

// Dense gradient buffers with touched-row tracking.
class GradientBuffer {
 public:
  explicit GradientBuffer(const MFModel& m)
      : dim_(m.dim()),
        users_(m.num_users() * m.dim(), 0.0),
        items_(m.num_items() * m.dim(), 0.0),
        bias_(m.num_items(), 0.0),
        user_touched_(m.num_users(), false),
        item_touched_(m.num_items(), false) {}

  double* user(UserIndex u) {
    if (!user_touched_[u]) {
      user_touched_[u] = true;
      user_order_.push_back(u);
    }
    return users_.data() + u * dim_;
  }
  double* item(ItemIndex i) {
    if (!item_touched_[i]) {
      item_touched_[i] = true;
      item_order_.push_back(i);
    }
    return items_.data() + i * dim_;
  }
  double& bias(ItemIndex i) {
    item(i);
    return bias_[i];
  }

  void add_triple(const TripleGradient& g, UserIndex u, ItemIndex pos, ItemIndex neg) {
    double* gu = user(u);
    double* gi = item(pos);
    double* gj = item(neg);
    for (std::size_t f = 0; f < dim_; ++f) {
      gu[f] += g.user[f];
      gi[f] += g.pos[f];
      gj[f] += g.neg[f];
    }
    bias_[pos] += g.pos_bias;
    bias_[neg] += g.neg_bias;
  }

  void apply(MFModel& m, double lr) {
    for (UserIndex u : user_order_) {
      auto p = m.user(u);
      double* g = users_.data() + u * dim_;
      for (std::size_t f = 0; f < dim_; ++f) {
        p[f] -= lr * g[f];
        g[f] = 0.0;
      }
      user_touched_[u] = false;
    }
    for (ItemIndex i : item_order_) {
      auto q = m.item(i);
      double* g = items_.data() + i * dim_;
      for (std::size_t f = 0; f < dim_; ++f) {
        q[f] -= lr * g[f];
        g[f] = 0.0;
      }
      if (m.has_bias()) m.bias(i) -= lr * bias_[i];
      bias_[i] = 0.0;
      item_touched_[i] = false;
    }
    user_order_.clear();
    item_order_.clear();
  }

 private:
  std::size_t dim_;
  std::vector<double> users_;
  std::vector<double> items_;
  std::vector<double> bias_;
  std::vector<bool> user_touched_;
  std::vector<bool> item_touched_;
  std::vector<UserIndex> user_order_;
  std::vector<ItemIndex> item_order_;
};

void check_epoch(double loss, const MFModel& model, std::size_t epoch) {
  if (!std::isfinite(loss) || !model.finite()) {
    throw DivergenceError("training diverged in epoch " + std::to_string(epoch + 1));
  }
}

double group_average(const std::vector<double>& per_group, std::span<const GroupIndex> groups) {
  double s = 0.0;
  for (GroupIndex g : groups) s += per_group[g];
  return s / static_cast<double>(groups.size());
}

}  // namespace

TrainResult train(const ingest::SplitDataset& data, const TrainConfig& config,
                  const TrainHooks& hooks) {
  const Prepared prep = prepare(data, config);
  const Catalog& catalog = data.catalog;
  const std::size_t num_groups = catalog.num_groups();
  if (!(hooks.penalty_weight >= 0.0)) throw InvalidArgument("penalty weight must be >= 0");

  TrainResult result{MFModel::gaussian(catalog.num_users(), catalog.num_items(), config.dim,
                                       config.item_bias, config.init_std, config.seed),
                     {}, {}, {}};
  MFModel& model = result.model;
  std::mt19937_64 rng(config.seed + 1);
  GradientBuffer grad(model);

  std::vector<double> ips;
  if (hooks.weights == WeightProvider::ips) ips = ips_weights(data.train, catalog, hooks.ips_smoothing);
  DualState duals(num_groups, hooks.dual_budget, hooks.dual_step);
  std::vector<double> dual_weights = fairdual_weights(duals);
  const std::vector<double> targets(num_groups, 1.0 / static_cast<double>(num_groups));
  MinmaxSampler sampler(num_groups, hooks.sampler_eta);

  // Positives listed per group for the minmax sampler.
  std::vector<std::vector<std::size_t>> by_group(num_groups);
  for (std::size_t k = 0; k < prep.positives.size(); ++k) {
    for (GroupIndex g : catalog.groups_of(prep.positives[k].item)) by_group[g].push_back(k);
  }

  const bool penalised = hooks.regularizer != PenaltyKind::none && hooks.penalty_weight > 0.0;
  const std::size_t n = prep.positives.size();
  std::vector<std::size_t> order(n);
  std::vector<std::size_t> batch;
  std::vector<std::size_t> penalised_samples;
  std::vector<double> pos_scores;
  std::vector<std::span<const GroupIndex>> pos_groups;
  std::vector<double> group_loss(num_groups);
  std::vector<double> group_count(num_groups);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (hooks.sampler == GroupSampler::uniform) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
    }
    double epoch_loss = 0.0;
    std::size_t triples = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      batch.clear();
      if (hooks.sampler == GroupSampler::uniform) {
        batch.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(end));
      } else {
        auto q = sampler.probabilities();
        for (GroupIndex g = 0; g < num_groups; ++g) {
          if (by_group[g].empty()) q[g] = 0.0;
        }
        std::discrete_distribution<std::size_t> pick_group(q.begin(), q.end());
        for (std::size_t s = start; s < end; ++s) {
          const auto& pool = by_group[pick_group(rng)];
          std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
          batch.push_back(pool[pick(rng)]);
        }
      }

      penalised_samples.clear();
      pos_scores.clear();
      pos_groups.clear();
      std::fill(group_loss.begin(), group_loss.end(), 0.0);
      std::fill(group_count.begin(), group_count.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t k : batch) {
        const Positive& p = prep.positives[k];
        ItemIndex neg = 0;
        if (!draw_negative(rng, prep.seen[p.user], catalog.num_items(), neg)) continue;
        double w = hooks.static_weight;
        if (hooks.weights == WeightProvider::ips) w = group_average(ips, catalog.groups_of(p.item));
        if (hooks.weights == WeightProvider::fairdual) {
          w = group_average(dual_weights, catalog.groups_of(p.item));
        }
        batch_loss += triple_loss(model, p.user, p.item, neg, w, config.l2);
        grad.add_triple(triple_gradient(model, p.user, p.item, neg, w, config.l2), p.user, p.item, neg);
        ++triples;

        const double x = model.score(p.user, p.item) - model.score(p.user, neg);
        for (GroupIndex g : catalog.groups_of(p.item)) {
          group_loss[g] += -log_sigmoid(x);
          group_count[g] += 1.0;
        }
        if (penalised) {
          pos_scores.push_back(model.score(p.user, p.item));
          pos_groups.push_back(catalog.groups_of(p.item));
          penalised_samples.push_back(k);
        }
      }

      if (penalised) {
        const Penalty pen = fairness_penalty(hooks.regularizer, pos_scores, pos_groups, num_groups);
        batch_loss += hooks.penalty_weight * pen.value;
        for (std::size_t s = 0; s < penalised_samples.size(); ++s) {
          const Positive& p = prep.positives[penalised_samples[s]];
          const double c = hooks.penalty_weight * pen.gradient[s];
          if (c == 0.0) continue;
          double* gu = grad.user(p.user);
          double* gi = grad.item(p.item);
          const auto pu = model.user(p.user);
          const auto qi = model.item(p.item);
          for (std::size_t f = 0; f < model.dim(); ++f) {
            gu[f] += c * qi[f];
            gi[f] += c * pu[f];
          }
          if (model.has_bias()) grad.bias(p.item) += c;
        }
      }
      grad.apply(model, config.learning_rate);
      epoch_loss += batch_loss;

      double credited = 0.0;
      for (double c : group_count) credited += c;
      if (hooks.weights == WeightProvider::fairdual && credited > 0.0) {
        std::vector<double> shares(num_groups);
        for (GroupIndex g = 0; g < num_groups; ++g) shares[g] = group_count[g] / credited;
        dual_weights = fairdual_step(duals, shares, targets);
      }
      if (hooks.sampler == GroupSampler::minmax) {
        std::vector<bool> present(num_groups);
        for (GroupIndex g = 0; g < num_groups; ++g) {
          present[g] = group_count[g] > 0.0;
          if (present[g]) group_loss[g] /= group_count[g];
        }
        sampler.update(group_loss, present);
      }
    }
    const double mean = triples > 0 ? epoch_loss / static_cast<double>(triples) : 0.0;
    check_epoch(mean, model, epoch);
    result.loss_curve.push_back(mean);
  }
  if (hooks.weights == WeightProvider::fairdual) {
    result.final_duals.assign(duals.prices().begin(), duals.prices().end());
  }
  if (hooks.sampler == GroupSampler::minmax) result.final_sampler = sampler.probabilities();
  return result;
}

TrainResult train_bpr(const ingest::SplitDataset& data, const TrainConfig& config) {
  const Prepared prep = prepare(data, config);
  const Catalog& catalog = data.catalog;
  TrainResult result{MFModel::gaussian(catalog.num_users(), catalog.num_items(), config.dim,
                                       config.item_bias, config.init_std, config.seed),
                     {}, {}, {}};
  MFModel& model = result.model;
  std::mt19937_64 rng(config.seed + 1);
  GradientBuffer grad(model);
  const std::size_t n = prep.positives.size();
  std::vector<std::size_t> order(n);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t triples = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      double batch_loss = 0.0;
      for (std::size_t s = start; s < end; ++s) {
        const Positive& p = prep.positives[order[s]];
        ItemIndex neg = 0;
        if (!draw_negative(rng, prep.seen[p.user], catalog.num_items(), neg)) continue;
        batch_loss += triple_loss(model, p.user, p.item, neg, 1.0, config.l2);
        grad.add_triple(triple_gradient(model, p.user, p.item, neg, 1.0, config.l2), p.user, p.item, neg);
        ++triples;
      }
      grad.apply(model, config.learning_rate);
      epoch_loss += batch_loss;
    }
    const double mean = triples > 0 ? epoch_loss / static_cast<double>(triples) : 0.0;
    check_epoch(mean, model, epoch);
    result.loss_curve.push_back(mean);
  }
  return result;
}

double pairwise_auc(const MFModel& model, const Catalog& catalog, const InteractionLog& log,
                    const InteractionLog& known) {
  std::vector<std::set<ItemIndex>> positives(catalog.num_users());
  std::vector<std::set<ItemIndex>> excluded(catalog.num_users());
  for (const auto& r : log.records) {
    const UserIndex u = catalog.user_index(r.user);
    const ItemIndex i = catalog.item_index(r.item);
    excluded[u].insert(i);
    if (r.label > 0.0) positives[u].insert(i);
  }
  for (const auto& r : known.records) {
    excluded[catalog.user_index(r.user)].insert(catalog.item_index(r.item));
  }
  double sum = 0.0;
  std::size_t users = 0;
  for (UserIndex u = 0; u < catalog.num_users(); ++u) {
    if (positives[u].empty()) continue;
    std::vector<double> neg;
    for (ItemIndex i = 0; i < catalog.num_items(); ++i) {
      if (!excluded[u].count(i)) neg.push_back(model.score(u, i));
    }
    if (neg.empty()) continue;
    double correct = 0.0;
    for (ItemIndex i : positives[u]) {
      const double s = model.score(u, i);
      for (double t : neg) correct += s > t ? 1.0 : (s == t ? 0.5 : 0.0);
    }
    sum += correct / static_cast<double>(positives[u].size() * neg.size());
    ++users;
  }
  if (users == 0) throw UndefinedMetric("no user has both positives and negatives");
  return sum / static_cast<double>(users);
}

}  // namespace fairrank::train
