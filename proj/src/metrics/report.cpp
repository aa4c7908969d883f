#include "fairrank/metrics/report.hpp"

#include <array>
#include <cmath>

#include "fairrank/errors.hpp"

namespace fairrank::metrics {

namespace {
constexpr auto up = Direction::higher_is_better;
constexpr auto down = Direction::lower_is_better;

constexpr std::array kMetrics = {
    MetricInfo{"ndcg", "NDCG", up},
    MetricInfo{"mrr", "MRR", up},
    MetricInfo{"hr", "HR", up},
    MetricInfo{"r_ndcg", "R-NDCG", up},
    MetricInfo{"u_loss", "u-loss", down},
    MetricInfo{"mmf", "MMF", up},
    MetricInfo{"gini", "GINI", down},
    MetricInfo{"entropy", "Entropy", up},
    MetricInfo{"min_max_ratio", "MinMaxRatio", up},
    MetricInfo{"err_ia", "ERR-IA", up},
    MetricInfo{"alpha_ndcg", "alpha-nDCG", up},
    MetricInfo{"s_recall", "S-rec", up},
    MetricInfo{"exposure_parity", "ExpParity", down},
    MetricInfo{"igf", "IGF", up},
};
}  // namespace

std::span<const MetricInfo> registered_metrics() { return kMetrics; }

std::optional<MetricInfo> find_metric(std::string_view key) {
  for (const auto& m : kMetrics) {
    if (m.key == key) return m;
  }
  return std::nullopt;
}

void MetricReport::set(std::string_view metric, double value) {
  if (!find_metric(metric)) throw InvalidArgument("unregistered metric '" + std::string(metric) + "'");
  if (!std::isfinite(value)) {
    throw InvalidArgument("metric '" + std::string(metric) + "' is not finite");
  }
  values[std::string(metric)] = value;
}

double MetricReport::at(std::string_view metric) const {
  auto it = values.find(std::string(metric));
  if (it == values.end()) throw InvalidArgument("report has no metric '" + std::string(metric) + "'");
  return it->second;
}

}  // namespace fairrank::metrics
