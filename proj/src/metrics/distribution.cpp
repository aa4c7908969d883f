#include "fairrank/metrics/distribution.hpp"

#include <algorithm>

#include "fairrank/errors.hpp"

namespace fairrank::metrics {

namespace {

double checked_total(std::span<const double> v, const char* name) {
  if (v.empty()) throw InvalidArgument(std::string(name) + ": needs at least one group");
  double total = 0.0;
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw InvalidArgument(std::string(name) + ": utilities must be finite and non-negative");
    }
    total += x;
  }
  return total;
}

}  // namespace

double gini(std::span<const double> v) {
  const double total = checked_total(v, "gini");
  if (total == 0.0) return 0.0;
  // direct pairwise sum: exact zero on uniform input
  double diff = 0.0;
  for (double a : v) {
    for (double b : v) diff += std::abs(a - b);
  }
  return diff / (2.0 * static_cast<double>(v.size()) * total);
}

double entropy(std::span<const double> v, double base) {
  const double total = checked_total(v, "entropy");
  if (!(base > 0.0) || base == 1.0) throw InvalidArgument("entropy: bad logarithm base");
  if (total == 0.0) return 0.0;
  double h = 0.0;
  for (double x : v) {
    if (x == 0.0) continue;
    const double p = x / total;
    h -= p * std::log(p);
  }
  return base == M_E ? h : h / std::log(base);
}

double mmf(std::span<const double> v) {
  const double total = checked_total(v, "mmf");
  if (total == 0.0) return 0.0;
  const double lo = *std::min_element(v.begin(), v.end());
  return static_cast<double>(v.size()) * lo / total;
}

double min_max_ratio(std::span<const double> v) {
  checked_total(v, "min_max_ratio");
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*hi == 0.0) return 1.0;
  return *lo / *hi;
}

}  // namespace fairrank::metrics
