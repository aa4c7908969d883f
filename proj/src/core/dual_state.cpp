#include "fairrank/core/dual_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fairrank/errors.hpp"

namespace fairrank {

DualState::DualState(std::size_t num_groups, double budget, double step)
    : budget_(budget), step_(step) {
  if (num_groups == 0) throw InvalidArgument("dual state needs at least one group");
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw InvalidArgument("dual budget must be >= 0");
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("dual step must be > 0");
  prices_.assign(num_groups, budget / static_cast<double>(num_groups));
}

void DualState::multiplicative_update(std::span<const double> log_factors) {
  if (log_factors.size() != prices_.size()) {
    throw InvalidArgument("dual update has " + std::to_string(log_factors.size()) +
                          " factors for " + std::to_string(prices_.size()) + " groups");
  }
  if (budget_ == 0.0) return;

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(prices_.size());
  double top = kNegInf;
  for (std::size_t g = 0; g < prices_.size(); ++g) {
    logs[g] = prices_[g] > 0.0 ? std::log(prices_[g]) + log_factors[g] : kNegInf;
    top = std::max(top, logs[g]);
  }
  if (top == kNegInf) {
    // every price underflowed; restart from the uniform point
    std::fill(prices_.begin(), prices_.end(), budget_ / static_cast<double>(prices_.size()));
    return;
  }
  double sum = 0.0;
  for (std::size_t g = 0; g < prices_.size(); ++g) {
    prices_[g] = logs[g] == kNegInf ? 0.0 : std::exp(logs[g] - top);
    sum += prices_[g];
  }
  for (double& p : prices_) p = budget_ * (p / sum);
}

bool DualState::on_simplex(double tol) const {
  double sum = 0.0;
  for (double p : prices_) {
    if (!(p >= 0.0)) return false;
    sum += p;
  }
  if (budget_ == 0.0) {
    return std::all_of(prices_.begin(), prices_.end(), [](double p) { return p == 0.0; });
  }
  return std::abs(sum - budget_) <= tol;
}

void DualState::check(double tol) const {
  if (!on_simplex(tol)) throw InvariantViolation("dual prices left the scaled simplex");
}

}  // namespace fairrank
