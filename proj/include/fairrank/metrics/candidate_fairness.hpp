#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace fairrank::metrics {

/// One entry of a ranked candidate list (rank = position + 1).
struct RankedCandidate {
  std::string group;
  double score = 0.0;
};

/// Largest gap between a group's share of position-discounted exposure in
/// the top k (rank r earns 1/log2(r+1)) and its share of the candidate
/// population. 0 means exposure is proportional to group size.
/// Throws InvalidArgument for an empty list or k == 0.
double exposure_parity(std::span<const RankedCandidate> ranked, std::size_t k);

/// In-group fairness: per group, the lowest accepted score (rank <= k) over
/// the highest rejected score. Groups without rejected members count as 1,
/// groups without accepted members are skipped; the result is the mean.
/// Throws UndefinedMetric when no group contributes or a contributing
/// group's highest rejected score is not positive.
double igf(std::span<const RankedCandidate> ranked, std::size_t k);

}  // namespace fairrank::metrics
