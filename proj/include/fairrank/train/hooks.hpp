#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairrank/core/catalog.hpp"
#include "fairrank/core/dual_state.hpp"
#include "fairrank/core/interaction_log.hpp"

namespace fairrank::train {

/// Per-group weights 1 / sum of item popularity (interaction counts in
/// `log`), rescaled to mean 1. `smoothing` is added to every item's count.
/// Throws ZeroPopularity when a group has no interactions.
std::vector<double> ips_weights(const InteractionLog& log, const Catalog& catalog,
                                double smoothing = 0.0);

/// Per-group sample weights |G| mu_g / lambda (all 1 when lambda is 0).
std::vector<double> fairdual_weights(const DualState& state);

/// Moves prices towards groups whose batch share falls short of their target:
/// mu_g <- mu_g exp(eta (beta_g - share_g)), rescaled to the budget, then
/// returns the new weights. Throws InvariantViolation for an invalid state
/// and InvalidArgument for mismatched or empty inputs.
std::vector<double> fairdual_step(DualState& state, std::span<const double> batch_shares,
                                  std::span<const double> targets);

/// Group sampler driven by exponentially averaged group losses.
class MinmaxSampler {
 public:
  MinmaxSampler(std::size_t num_groups, double eta);

  /// avg_g <- 0.9 avg_g + 0.1 loss_g for every group with present[g].
  void update(std::span<const double> losses, const std::vector<bool>& present);

  /// q_g proportional to exp(eta * avg_g).
  std::vector<double> probabilities() const;

  std::span<const double> averages() const { return averages_; }

 private:
  double eta_;
  std::vector<double> averages_;
};

enum class PenaltyKind { none, reg, focf };

PenaltyKind parse_penalty(std::string_view name);
std::string to_string(PenaltyKind k);

struct Penalty {
  double value = 0.0;
  std::vector<double> gradient;  ///< d value / d score, per sample
};

/// Group-gap penalty over batch positive scores. A sample counts towards
/// each of its groups. With m_g the group means over groups present:
///   reg:  sum_{g<g'} (m_g - m_g')^2
///   focf: sum_g |m_g - m_all|, m_all the mean over samples.
/// Fewer than two groups present gives 0 with a zero gradient.
Penalty fairness_penalty(PenaltyKind kind, std::span<const double> scores,
                         const std::vector<std::span<const GroupIndex>>& groups,
                         std::size_t num_groups);

}  // namespace fairrank::train
