#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace fairrank::metrics {

enum class Direction { higher_is_better, lower_is_better };

struct MetricInfo {
  std::string_view key;      ///< config / record name, e.g. "ndcg"
  std::string_view display;  ///< table header, e.g. "NDCG"
  Direction direction;
};

/// Every metric a report may carry.
std::span<const MetricInfo> registered_metrics();
std::optional<MetricInfo> find_metric(std::string_view key);

/// Values of one (model, dataset, K, mode) evaluation keyed by metric name.
struct MetricReport {
  struct Provenance {
    std::string model;
    std::string dataset;
    std::size_t k = 0;
    std::string mode;
  };

  Provenance provenance;
  std::map<std::string, double> values;

  /// Throws InvalidArgument for an unregistered name or a non-finite value.
  void set(std::string_view metric, double value);
  double at(std::string_view metric) const;
  bool has(std::string_view metric) const { return values.count(std::string(metric)) != 0; }
};

}  // namespace fairrank::metrics
