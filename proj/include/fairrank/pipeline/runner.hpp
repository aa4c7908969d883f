#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fairrank/pipeline/benchmark_report.hpp"
#include "fairrank/pipeline/run_config.hpp"

namespace fairrank::pipeline {

/// Where a run reads and writes.
struct RunPaths {
  std::filesystem::path data_root = "dataset";  ///< holds one directory per dataset
  std::filesystem::path log_root = "log";       ///< runs land in log_root/log_name
};

/// Dispatches the configured stage and returns its report (config snapshot
/// included, wall time excluded). Stage artifacts such as score files,
/// checkpoints and diversified runs are written to `log_dir`; processed
/// datasets go to the dataset directory. Throws UnsupportedStage for
/// pre-processing and search in-processing.
BenchmarkReport execute(const RunConfig& config, const RunPaths& paths,
                        const std::filesystem::path& log_dir);

struct RunOptions {
  std::string task;
  std::string stage;
  std::string dataset;
  std::optional<std::filesystem::path> config_file;
  std::filesystem::path properties;
  RunPaths paths;
  bool strict = true;
};

/// Resolves the layered config, locks log_root/log_name, executes and emits
/// the report. Errors are printed to `err` and recorded in error.txt inside
/// the log directory when it is known. Returns the process exit code.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// FAIRDIVERSE_DATA_DIR when set, otherwise `fallback`.
std::filesystem::path data_root_from_env(const std::filesystem::path& fallback);

}  // namespace fairrank::pipeline
