#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fairrank::pipeline {

struct ReportRow {
  std::string model;
  std::size_t k = 0;
  std::map<std::string, double> values;  ///< metric key -> value
};

struct AllocationRow {
  std::string model;
  std::size_t k = 0;
  std::string axis;
  std::string mode;
  std::vector<std::pair<std::string, double>> groups;  ///< group id, utility
};

struct BenchmarkReport {
  std::string task;
  std::string stage;
  std::string dataset;
  std::uint64_t seed = 0;
  std::vector<std::string> metrics;  ///< requested metric keys, in request order
  std::vector<ReportRow> rows;
  std::vector<AllocationRow> allocations;
  std::vector<std::pair<std::string, std::string>> summary;  ///< stage notes, e.g. counts
  std::string config_snapshot;
  double wall_seconds = 0.0;
};

/// Fixed 4-decimal rendering; negative zero prints as 0.0000.
std::string format_metric(double value);

/// One JSON object per (model, K) row.
std::string render_records(const BenchmarkReport& report);

/// Aligned text tables. Recommendation metrics are laid out as
///   NDCG MRR HR MMF GINI Entropy
///   R-NDCG u-loss MMF GINI Entropy MinMaxRatio
/// and search metrics as ERR-IA alpha-nDCG S-rec; each table keeps only the
/// requested metrics and is printed when it has a metric of its own.
std::string render_table(const BenchmarkReport& report);

/// model, K, axis, mode, group, utility as TSV.
std::string render_allocations(const BenchmarkReport& report);

/// Writes records.jsonl, table.txt, allocations.tsv, config.yaml and
/// timing.txt into `dir`. Everything but timing.txt depends only on the
/// report contents. Throws IoError.
void emit_report(const BenchmarkReport& report, const std::filesystem::path& dir);

}  // namespace fairrank::pipeline
