#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fairrank {

/// Group prices on the budget-scaled simplex {mu >= 0, sum mu = budget}.
///
/// Updates are multiplicative (mirror descent with the entropic mirror map)
/// followed by a rescale back onto the simplex. A zero budget pins every
/// price at zero.
class DualState {
 public:
  DualState() = default;
  /// Uniform prices budget / num_groups. Throws InvalidArgument on a negative
  /// budget, non-positive step or zero groups.
  DualState(std::size_t num_groups, double budget, double step);

  double budget() const { return budget_; }
  double step() const { return step_; }
  std::span<const double> prices() const { return prices_; }
  double price(std::size_t g) const { return prices_[g]; }
  std::size_t num_groups() const { return prices_.size(); }

  /// mu_g <- mu_g * exp(log_factors[g]), then rescale to sum to the budget.
  /// Computed in the log domain so large factors cannot overflow.
  void multiplicative_update(std::span<const double> log_factors);

  /// True when prices are non-negative and sum to the budget within `tol`.
  bool on_simplex(double tol = 1e-9) const;

  /// Throws InvariantViolation when on_simplex(tol) fails.
  void check(double tol = 1e-9) const;

 private:
  double budget_ = 0.0;
  double step_ = 0.1;
  std::vector<double> prices_;
};

}  // namespace fairrank
