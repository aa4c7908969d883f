#include "fairrank/metrics/candidate_fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fairrank/errors.hpp"

namespace fairrank::metrics {

double exposure_parity(std::span<const RankedCandidate> ranked, std::size_t k) {
  if (ranked.empty()) throw InvalidArgument("exposure_parity: no candidates");
  if (k == 0) throw InvalidArgument("exposure_parity: cutoff must be positive");

  struct Tally {
    double exposure = 0.0;
    std::size_t members = 0;
  };
  std::map<std::string, Tally> groups;
  double total_exposure = 0.0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    auto& t = groups[ranked[r].group];
    ++t.members;
    if (r < k) {
      const double e = 1.0 / std::log2(static_cast<double>(r) + 2.0);
      t.exposure += e;
      total_exposure += e;
    }
  }
  double worst = 0.0;
  for (const auto& [group, t] : groups) {
    const double exposure_share = t.exposure / total_exposure;
    const double population_share =
        static_cast<double>(t.members) / static_cast<double>(ranked.size());
    worst = std::max(worst, std::abs(exposure_share - population_share));
  }
  return worst;
}

double igf(std::span<const RankedCandidate> ranked, std::size_t k) {
  struct Bounds {
    double min_accepted = std::numeric_limits<double>::infinity();
    double max_rejected = -std::numeric_limits<double>::infinity();
    bool accepted = false;
    bool rejected = false;
  };
  std::map<std::string, Bounds> groups;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    if (!std::isfinite(ranked[r].score)) throw InvalidArgument("igf: scores must be finite");
    auto& b = groups[ranked[r].group];
    if (r < k) {
      b.accepted = true;
      b.min_accepted = std::min(b.min_accepted, ranked[r].score);
    } else {
      b.rejected = true;
      b.max_rejected = std::max(b.max_rejected, ranked[r].score);
    }
  }
  double sum = 0.0;
  std::size_t contributing = 0;
  for (const auto& [group, b] : groups) {
    if (!b.accepted) continue;
    if (!b.rejected) {
      sum += 1.0;
    } else {
      if (!(b.max_rejected > 0.0)) {
        throw UndefinedMetric("igf: group '" + group + "' has a non-positive highest rejected score");
      }
      sum += b.min_accepted / b.max_rejected;
    }
    ++contributing;
  }
  if (contributing == 0) throw UndefinedMetric("igf: no group has an accepted candidate");
  return sum / static_cast<double>(contributing);
}

}  // namespace fairrank::metrics
