#pragma once

#include <cmath>
#include <span>

#include "fairrank/core/group_utility.hpp"

namespace fairrank::metrics {

// Inequality measures over a group-utility vector: invariant under positive
// scaling and group permutation. Inputs must be non-empty, finite and
// non-negative (InvalidArgument otherwise).

/// sum_{g,g'} |v_g - v_g'| / (2 |G| sum v), in [0, 1); 0 for a zero total.
double gini(std::span<const double> v);

/// -sum p_g log p_g with p = v / sum v, 0 log 0 = 0; 0 for a zero total.
/// `base` selects the logarithm (natural by default).
double entropy(std::span<const double> v, double base = M_E);

/// |G| * min v / sum v, so a uniform vector scores 1; 0 for a zero total.
double mmf(std::span<const double> v);

/// min v / max v; 1 when max is 0.
double min_max_ratio(std::span<const double> v);

inline double gini(const GroupUtilityVector& v) { return gini(v.values); }
inline double entropy(const GroupUtilityVector& v, double base = M_E) { return entropy(v.values, base); }
inline double mmf(const GroupUtilityVector& v) { return mmf(v.values); }
inline double min_max_ratio(const GroupUtilityVector& v) { return min_max_ratio(v.values); }

}  // namespace fairrank::metrics
