#include "fairrank/train/hooks.hpp"

#include <algorithm>
#include <cmath>

#include "fairrank/errors.hpp"

namespace fairrank::train {

std::vector<double> ips_weights(const InteractionLog& log, const Catalog& catalog,
                                double smoothing) {
  std::vector<double> popularity(catalog.num_items(), smoothing);
  for (const auto& r : log.records) popularity[catalog.item_index(r.item)] += 1.0;
  std::vector<double> weights(catalog.num_groups(), 0.0);
  for (GroupIndex g = 0; g < catalog.num_groups(); ++g) {
    double sum = 0.0;
    for (ItemIndex i : catalog.items_in(g)) sum += popularity[i];
    if (!(sum > 0.0)) throw ZeroPopularity("group '" + catalog.group_id(g) + "' has no interactions");
    weights[g] = 1.0 / sum;
  }
  double mean = 0.0;
  for (double w : weights) mean += w;
  mean /= static_cast<double>(weights.size());
  for (double& w : weights) w /= mean;
  return weights;
}

std::vector<double> fairdual_weights(const DualState& state) {
  std::vector<double> w(state.num_groups(), 1.0);
  if (state.budget() == 0.0) return w;
  const auto scale = static_cast<double>(state.num_groups()) / state.budget();
  for (std::size_t g = 0; g < w.size(); ++g) w[g] = scale * state.price(g);
  return w;
}

std::vector<double> fairdual_step(DualState& state, std::span<const double> batch_shares,
                                  std::span<const double> targets) {
  state.check(1e-6);
  if (batch_shares.empty() || batch_shares.size() != state.num_groups() ||
      targets.size() != state.num_groups()) {
    throw InvalidArgument("fairdual_step needs one share and one target per group");
  }
  std::vector<double> log_factors(state.num_groups());
  for (std::size_t g = 0; g < log_factors.size(); ++g) {
    log_factors[g] = state.step() * (targets[g] - batch_shares[g]);
  }
  state.multiplicative_update(log_factors);
  return fairdual_weights(state);
}

MinmaxSampler::MinmaxSampler(std::size_t num_groups, double eta)
    : eta_(eta), averages_(num_groups, 0.0) {
  if (num_groups == 0) throw InvalidArgument("minmax sampler needs at least one group");
  if (!std::isfinite(eta)) throw InvalidArgument("minmax sampler eta must be finite");
}

void MinmaxSampler::update(std::span<const double> losses, const std::vector<bool>& present) {
  if (losses.size() != averages_.size() || present.size() != averages_.size()) {
    throw InvalidArgument("one loss per group");
  }
  for (std::size_t g = 0; g < averages_.size(); ++g) {
    if (!present[g]) continue;
    if (!std::isfinite(losses[g])) throw InvalidArgument("group losses must be finite");
    averages_[g] = 0.9 * averages_[g] + 0.1 * losses[g];
  }
}

std::vector<double> MinmaxSampler::probabilities() const {
  std::vector<double> q(averages_.size());
  double top = -INFINITY;
  for (std::size_t g = 0; g < q.size(); ++g) {
    q[g] = eta_ * averages_[g];
    top = std::max(top, q[g]);
  }
  double sum = 0.0;
  for (double& x : q) sum += (x = std::exp(x - top));
  for (double& x : q) x /= sum;
  return q;
}

PenaltyKind parse_penalty(std::string_view name) {
  if (name == "none") return PenaltyKind::none;
  if (name == "reg") return PenaltyKind::reg;
  if (name == "focf") return PenaltyKind::focf;
  throw InvalidArgument("unknown regularizer '" + std::string(name) + "'");
}

std::string to_string(PenaltyKind k) {
  switch (k) {
    case PenaltyKind::none: return "none";
    case PenaltyKind::reg: return "reg";
    case PenaltyKind::focf: return "focf";
  }
  return "none";
}

Penalty fairness_penalty(PenaltyKind kind, std::span<const double> scores,
                         const std::vector<std::span<const GroupIndex>>& groups,
                         std::size_t num_groups) {
  if (groups.size() != scores.size()) throw InvalidArgument("one group list per score");
  Penalty out{0.0, std::vector<double>(scores.size(), 0.0)};
  if (kind == PenaltyKind::none || scores.empty()) return out;

  std::vector<double> sum(num_groups, 0.0);
  std::vector<double> count(num_groups, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    total += scores[k];
    for (GroupIndex g : groups[k]) {
      sum[g] += scores[k];
      count[g] += 1.0;
    }
  }
  std::vector<GroupIndex> present;
  std::vector<double> mean(num_groups, 0.0);
  for (GroupIndex g = 0; g < num_groups; ++g) {
    if (count[g] > 0.0) {
      present.push_back(g);
      mean[g] = sum[g] / count[g];
    }
  }
  if (present.size() < 2) return out;

  // dvalue/dm_g; then dm_g/ds_k = 1/n_g for samples in g.
  std::vector<double> d_mean(num_groups, 0.0);
  double d_all = 0.0;
  if (kind == PenaltyKind::reg) {
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        const double diff = mean[present[a]] - mean[present[b]];
        out.value += diff * diff;
        d_mean[present[a]] += 2.0 * diff;
        d_mean[present[b]] -= 2.0 * diff;
      }
    }
  } else {
    const double all = total / static_cast<double>(scores.size());
    for (GroupIndex g : present) {
      const double diff = mean[g] - all;
      out.value += std::abs(diff);
      const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      d_mean[g] += sign;
      d_all -= sign;
    }
  }
  for (std::size_t k = 0; k < scores.size(); ++k) {
    double g_k = d_all / static_cast<double>(scores.size());
    for (GroupIndex g : groups[k]) g_k += d_mean[g] / count[g];
    out.gradient[k] = g_k;
  }
  return out;
}

}  // namespace fairrank::train
