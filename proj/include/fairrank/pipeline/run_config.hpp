#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairrank/core/group_utility.hpp"
#include "fairrank/pipeline/config.hpp"

namespace fairrank::pipeline {

enum class Task { recommendation, search };
enum class Stage { process, pre_processing, in_processing, post_processing, evaluate };

Task parse_task(std::string_view text);
Stage parse_stage(std::string_view text);
std::string to_string(Task t);
std::string to_string(Stage s);

/// Models runnable for a task and stage, in registry order.
std::span<const std::string_view> registered_models(Task task, Stage stage);
/// Parameter keys a model's section may carry.
std::span<const std::string_view> model_parameters(std::string_view model);

/// Typed view of a config section. Getters throw ConfigError naming the key
/// when a value does not parse.
class SectionView {
 public:
  SectionView(std::string name, ConfigSection section)
      : name_(std::move(name)), section_(std::move(section)) {}

  bool has(std::string_view key) const { return section_.count(std::string(key)) != 0; }
  std::string get_string(std::string_view key, std::string_view fallback) const;
  double get_double(std::string_view key, double fallback) const;
  std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::vector<double> get_doubles(std::string_view key, std::vector<double> fallback) const;
  const ConfigSection& raw() const { return section_; }

 private:
  const SectionValue* find(std::string_view key) const;
  std::string name_;
  ConfigSection section_;
};

struct RunConfig {
  Task task = Task::recommendation;
  Stage stage = Stage::post_processing;
  std::string dataset;
  std::vector<std::string> models;
  std::vector<std::size_t> topk;
  std::vector<std::string> metrics;
  std::string log_name;
  std::uint64_t seed = 2024;
  UtilityMode utility_mode = UtilityMode::exposure;
  std::string arrival_order = "id";      ///< id | shuffle
  std::string target_shares = "uniform";  ///< uniform | proportional
  std::string data_type = "pair";
  bool fair_rank = true;  ///< false trains every in-processing model as plain BPR

  SectionView data{"data", {}};
  SectionView train{"train", {}};
  std::map<std::string, SectionView> model_params;

  ConfigMap resolved;  ///< the merged document this config was built from

  const SectionView& params(const std::string& model) const;
};

/// Validates a merged document. Unknown keys throw UnknownKeyError in strict
/// mode; otherwise each is reported through `warn`. Invariant violations
/// (unknown task/stage/model/metric, empty K list, non-positive K, empty
/// log_name) throw ConfigError.
RunConfig build_run_config(const ConfigMap& merged, bool strict = true,
                           const std::function<void(const std::string&)>& warn = {});

struct ConfigLayers {
  std::filesystem::path properties;  ///< root holding dataset/, stage/, models/
  std::string task;
  std::string stage;
  std::string dataset;
  std::optional<std::filesystem::path> user_file;
};

/// Merges dataset defaults, stage defaults, the defaults of every selected
/// model, then the user file. Throws ConfigError when the dataset defaults
/// are missing or a selected model is not registered for the task and stage.
ConfigMap merge_layers(const ConfigLayers& layers);

}  // namespace fairrank::pipeline
