#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "fairrank/pipeline/runner.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Fairness- and diversity-aware ranking benchmark runner"};
  fairrank::pipeline::RunOptions opts;
  std::string config;
  std::string properties;
  std::string data_dir = "dataset";
  std::string log_dir = "log";
  bool lenient = false;

  app.add_option("--task", opts.task, "recommendation or search")->required();
  app.add_option("--stage", opts.stage,
                 "process, pre-processing, in-processing, post-processing or evaluate")
      ->required();
  app.add_option("--dataset", opts.dataset, "dataset name")->required();
  app.add_option("--config,--train_config_file", config, "user configuration file");
  app.add_option("--properties", properties, "default configuration root");
  app.add_option("--data-dir", data_dir, "dataset root (FAIRDIVERSE_DATA_DIR takes precedence)");
  app.add_option("--log-dir", log_dir, "root for run logs");
  app.add_flag("--lenient", lenient, "warn about unknown config keys instead of failing");
  CLI11_PARSE(app, argc, argv);

  if (!config.empty()) opts.config_file = config;
  if (properties.empty()) {
    properties = fs::is_directory("properties") ? "properties" : FAIRRANK_PROPERTIES_DIR;
  }
  opts.properties = properties;
  opts.paths.data_root = fairrank::pipeline::data_root_from_env(data_dir);
  opts.paths.log_root = log_dir;
  opts.strict = !lenient;
  return fairrank::pipeline::run(opts, std::cout, std::cerr);
}
