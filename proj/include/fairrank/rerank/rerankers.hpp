#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fairrank/core/dual_state.hpp"
#include "fairrank/core/ranking_slate.hpp"
#include "fairrank/rerank/context.hpp"

namespace fairrank::rerank {

// Every re-ranker returns slates of min(K, |candidates|) distinct candidates
// per user and throws EmptyCandidates when a user has no candidates. All
// ties fall back to (score desc, item id asc).

/// Score-sorted top-K per user.
RankingSlate topk(const RerankContext& ctx);

/// Online greedy with a worst-off bonus. Users arrive in order; at round t
/// the normalised utility of group g is v_g / max(1, t*K) and item i is
/// ranked by s + lambda * (min_g' util_g' - max_{g in groups(i)} util_g).
/// Strictly sequential over the arrival order.
RankingSlate min_regularizer(const RerankContext& ctx, double lambda);

struct CpFairParams {
  double lambda = 0.1;          ///< largest relevance loss a single swap may cost
  std::size_t swap_budget = 200;
};

/// Greedy knapsack repair of the score-sorted top-K.
///
/// Repeatedly applies the single (user, out item, in item) swap with the best
/// ratio of group-exposure deviation reduction, sum_g |e_g - beta_g sum e|,
/// to relevance lost. A swap is admissible when the in item is not already
/// in the slate and loses at most `lambda` relevance; lambda = 0 disables
/// swapping. Stops at the budget or when no admissible swap reduces the
/// deviation. Final slates are ordered by score.
RankingSlate cpfair(const RerankContext& ctx, const CpFairParams& params);

/// sum_g |e_g - beta_g * sum_g e_g|.
double exposure_deviation(const std::vector<double>& exposure, const std::vector<double>& shares);

struct FairRecOutcome {
  RankingSlate slates;
  std::size_t guarantee = 0;  ///< per-group exposure floor floor(phi*K*|U|/|G|)
  double achieved_min = 0.0;  ///< smallest group exposure after both phases
};

/// Two-phase max-min-share allocation over item exposure counts.
///
/// Phase 1 visits users round-robin in arrival order; each adds its
/// highest-scored unused item from any group still below the guarantee,
/// until every group reaches it or a full pass adds nothing. Phase 2 fills
/// the remaining slots by score. Slates are ordered by score. If every
/// user's candidates cover every group with at least K items, every group
/// reaches the guarantee. Throws InvalidArgument for phi outside (0, 1].
FairRecOutcome fairrec(const RerankContext& ctx, double phi);

struct PmmfParams {
  double lambda = 1.0;  ///< dual budget
  double eta = 0.1;     ///< mirror-descent step
};

struct PmmfOutcome {
  RankingSlate slates;
  DualState final_state;
};

/// Called after each user's dual update with the user and the new state.
using DualObserver = std::function<void(UserIndex, const DualState&)>;

/// Online dual mirror descent over group prices.
///
/// Prices start at lambda/|G|. Each arriving user gets the top-K of
/// s - sum_{g in groups(i)} mu_g; with e_g the exposure the slate gave group
/// g, the prices move by mu_g <- mu_g exp(-eta (beta_g K - e_g)) and are
/// rescaled onto the lambda-simplex. Over-exposed groups become more
/// expensive. Strictly sequential over the arrival order.
PmmfOutcome pmmf(const RerankContext& ctx, const PmmfParams& params,
                 const DualObserver& observer = {});

struct WelfParams {
  double lambda = 1.0;     ///< weight of the welfare term
  double alpha = 0.5;      ///< curvature of psi, in (0, 1)
  std::size_t iterations = 50;
  double smoothing = 1e-3;  ///< added to E_g before psi
};

struct WelfOutcome {
  RankingSlate slates;
  /// Fractional policy, aligned with each user's score row (item order).
  std::vector<std::vector<double>> policy;
  std::vector<double> duality_gaps;  ///< one per Frank-Wolfe step
  std::vector<double> objective;     ///< F before the first and after every step
  /// Largest violation of {0 <= pi <= 1, row sum = K_u} over all iterates.
  double max_polytope_violation = 0.0;
};

/// Frank-Wolfe maximisation of
///   F(pi) = sum pi_ui s_ui + lambda sum_g psi(E_g + eps),
///   psi(x) = x^(1-alpha) / (1-alpha),  E_g = sum_{u, i in g} pi_ui,
/// over per-user polytopes {0 <= pi_u <= 1, sum_i pi_ui = K_u}. Starts from
/// the top-K indicator; the linear maximiser is the per-user top-K of the
/// gradient; step 2/(t+2). The final slate holds the per-user top-K of pi
/// (ties by score, then item) ordered by score.
WelfOutcome welf(const RerankContext& ctx, const WelfParams& params);

/// F(pi) for a policy aligned with the score rows (used by tests and welf).
double welfare_objective(const RerankContext& ctx, const std::vector<std::vector<double>>& policy,
                         const WelfParams& params);

}  // namespace fairrank::rerank
