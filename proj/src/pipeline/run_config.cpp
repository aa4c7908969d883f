#include "fairrank/pipeline/run_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>

#include "fairrank/errors.hpp"
#include "fairrank/metrics/report.hpp"

namespace fairrank::pipeline {

namespace {

using namespace std::string_view_literals;

constexpr std::array kRecIn = {"bpr"sv, "ips"sv, "fairdual"sv, "minmax"sv, "reg"sv, "focf"sv};
constexpr std::array kRecPost = {"base"sv,  "min_regularizer"sv, "cpfair"sv,
                                 "fairrec"sv, "pmmf"sv,            "welf"sv};
constexpr std::array kSearchPost = {"xquad"sv, "pm2"sv};
constexpr std::array kEvaluate = {"base"sv};
constexpr std::array<std::string_view, 0> kNone{};

constexpr std::array kRecMetrics = {"ndcg"sv, "mrr"sv,     "hr"sv,      "r_ndcg"sv,       "u_loss"sv,
                                    "mmf"sv,  "gini"sv,    "entropy"sv, "min_max_ratio"sv};
constexpr std::array kSearchMetrics = {"err_ia"sv, "alpha_ndcg"sv, "s_recall"sv};

constexpr std::array kTopLevel = {"task"sv,          "stage"sv,         "dataset"sv,   "model"sv,
                                  "topk"sv,          "metrics"sv,       "log_name"sv,  "seed"sv,
                                  "utility_mode"sv,  "arrival_order"sv, "target_shares"sv,
                                  "data_type"sv,     "fair-rank"sv,     "data"sv,      "train"sv};
constexpr std::array kDataKeys = {
    "interactions_file"sv, "item_groups_file"sv, "user_groups_file"sv, "user_column"sv,
    "item_column"sv,       "label_column"sv,     "timestamp_column"sv, "delimiter"sv,
    "min_interactions"sv,  "split_ratios"sv,     "processed_dir"sv,    "score_file"sv,
    "run_file"sv,          "qrels_file"sv,       "run_depth"sv,        "alpha"sv};
constexpr std::array kTrainKeys = {"dim"sv,        "epochs"sv,    "learning_rate"sv, "l2"sv,
                                   "batch_size"sv, "item_bias"sv, "init_std"sv};

struct ModelKeys {
  std::string_view model;
  std::span<const std::string_view> keys;
};

constexpr std::array kLambda = {"lambda"sv};
constexpr std::array kLambdaEta = {"lambda"sv, "eta"sv};
constexpr std::array kEta = {"eta"sv};
constexpr std::array kSmoothing = {"smoothing"sv};
constexpr std::array kLambdaF = {"lambda_f"sv};
constexpr std::array kCpFair = {"lambda"sv, "swap_budget"sv};
constexpr std::array kPhi = {"phi"sv};
constexpr std::array kWelf = {"lambda"sv, "alpha"sv, "iterations"sv, "smoothing"sv};

const std::array kModelKeys = {
    ModelKeys{"bpr", kNone},         ModelKeys{"ips", kSmoothing},
    ModelKeys{"fairdual", kLambdaEta}, ModelKeys{"minmax", kEta},
    ModelKeys{"reg", kLambdaF},      ModelKeys{"focf", kLambdaF},
    ModelKeys{"min_regularizer", kLambda},
    ModelKeys{"cpfair", kCpFair},    ModelKeys{"fairrec", kPhi},
    ModelKeys{"pmmf", kLambdaEta},   ModelKeys{"welf", kWelf},
    ModelKeys{"xquad", kLambda},     ModelKeys{"pm2", kLambda},
    ModelKeys{"base", kNone},
};

template <typename Range>
bool contains(const Range& r, std::string_view v) {
  return std::find(std::begin(r), std::end(r), v) != std::end(r);
}

const ModelKeys* find_model(std::string_view model) {
  for (const auto& m : kModelKeys) {
    if (m.model == model) return &m;
  }
  return nullptr;
}

std::string describe(const SectionValue& v) {
  if (const auto* s = std::get_if<ConfigScalar>(&v)) return "'" + *s + "'";
  return "a list";
}

double to_double(const std::string& text, const std::string& key) {
  double out = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  }
  return out;
}

std::int64_t to_int(const std::string& text, const std::string& key) {
  std::int64_t out = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  }
  return out;
}

bool to_bool(const std::string& text, const std::string& key) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigError("'" + key + "' expects a boolean, got '" + text + "'");
}

const std::string* scalar_of(const ConfigMap& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) return nullptr;
  const auto* s = std::get_if<ConfigScalar>(&it->second);
  if (!s) throw ConfigError("'" + key + "' must be a scalar");
  return s;
}

// A scalar or a list, as a list.
std::vector<std::string> list_of(const ConfigMap& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) return {};
  if (const auto* s = std::get_if<ConfigScalar>(&it->second)) return {*s};
  if (const auto* l = std::get_if<ConfigList>(&it->second)) return *l;
  throw ConfigError("'" + key + "' must be a scalar or a list");
}

ConfigSection section_of(const ConfigMap& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) return {};
  const auto* s = std::get_if<ConfigSection>(&it->second);
  if (!s) throw ConfigError("'" + key + "' must be a section");
  return *s;
}

}  // namespace

Task parse_task(std::string_view text) {
  if (text == "recommendation") return Task::recommendation;
  if (text == "search") return Task::search;
  throw ConfigError("unknown task '" + std::string(text) + "'");
}

Stage parse_stage(std::string_view text) {
  if (text == "process") return Stage::process;
  if (text == "pre-processing") return Stage::pre_processing;
  if (text == "in-processing") return Stage::in_processing;
  if (text == "post-processing") return Stage::post_processing;
  if (text == "evaluate") return Stage::evaluate;
  throw ConfigError("unknown stage '" + std::string(text) + "'");
}

std::string to_string(Task t) { return t == Task::recommendation ? "recommendation" : "search"; }

std::string to_string(Stage s) {
  switch (s) {
    case Stage::process: return "process";
    case Stage::pre_processing: return "pre-processing";
    case Stage::in_processing: return "in-processing";
    case Stage::post_processing: return "post-processing";
    case Stage::evaluate: return "evaluate";
  }
  return "process";
}

std::span<const std::string_view> registered_models(Task task, Stage stage) {
  switch (stage) {
    case Stage::in_processing:
      return task == Task::recommendation ? std::span<const std::string_view>(kRecIn) : kNone;
    case Stage::post_processing:
      if (task == Task::recommendation) return kRecPost;
      return kSearchPost;
    case Stage::evaluate: return kEvaluate;
    default: return kNone;
  }
}

std::span<const std::string_view> model_parameters(std::string_view model) {
  const auto* m = find_model(model);
  return m ? m->keys : std::span<const std::string_view>();
}

const SectionValue* SectionView::find(std::string_view key) const {
  const auto it = section_.find(std::string(key));
  return it == section_.end() ? nullptr : &it->second;
}

std::string SectionView::get_string(std::string_view key, std::string_view fallback) const {
  const auto* v = find(key);
  if (!v) return std::string(fallback);
  const auto* s = std::get_if<ConfigScalar>(v);
  if (!s) throw ConfigError("'" + name_ + "." + std::string(key) + "' must be a scalar");
  return *s;
}

double SectionView::get_double(std::string_view key, double fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  const auto* s = std::get_if<ConfigScalar>(v);
  const std::string full = name_ + "." + std::string(key);
  if (!s) throw ConfigError("'" + full + "' expects a number, got " + describe(*v));
  return to_double(*s, full);
}

std::int64_t SectionView::get_int(std::string_view key, std::int64_t fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  const auto* s = std::get_if<ConfigScalar>(v);
  const std::string full = name_ + "." + std::string(key);
  if (!s) throw ConfigError("'" + full + "' expects an integer, got " + describe(*v));
  return to_int(*s, full);
}

bool SectionView::get_bool(std::string_view key, bool fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  const auto* s = std::get_if<ConfigScalar>(v);
  const std::string full = name_ + "." + std::string(key);
  if (!s) throw ConfigError("'" + full + "' expects a boolean, got " + describe(*v));
  return to_bool(*s, full);
}

std::vector<double> SectionView::get_doubles(std::string_view key,
                                             std::vector<double> fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  const std::string full = name_ + "." + std::string(key);
  const auto* l = std::get_if<ConfigList>(v);
  if (!l) throw ConfigError("'" + full + "' expects a list of numbers");
  std::vector<double> out;
  for (const auto& x : *l) out.push_back(to_double(x, full));
  return out;
}

const SectionView& RunConfig::params(const std::string& model) const {
  static const SectionView empty{"", {}};
  const auto it = model_params.find(model);
  return it == model_params.end() ? empty : it->second;
}

RunConfig build_run_config(const ConfigMap& merged, bool strict,
                           const std::function<void(const std::string&)>& warn) {
  auto unknown = [&](const std::string& key) {
    if (strict) throw UnknownKeyError("unknown config key '" + key + "'");
    if (warn) warn("ignoring unknown config key '" + key + "'");
  };

  RunConfig rc;
  rc.resolved = merged;
  for (const auto& [key, value] : merged) {
    if (contains(kTopLevel, key)) continue;
    if (const auto* m = find_model(key)) {
      const auto* section = std::get_if<ConfigSection>(&value);
      if (!section) throw ConfigError("'" + key + "' must be a section of model parameters");
      for (const auto& [param, v] : *section) {
        if (!contains(m->keys, param)) unknown(key + "." + param);
      }
      rc.model_params.emplace(key, SectionView(key, *section));
      continue;
    }
    unknown(key);
  }
  for (const auto& [k, v] : section_of(merged, "data")) {
    if (!contains(kDataKeys, k)) unknown("data." + k);
  }
  for (const auto& [k, v] : section_of(merged, "train")) {
    if (!contains(kTrainKeys, k)) unknown("train." + k);
  }
  rc.data = SectionView("data", section_of(merged, "data"));
  rc.train = SectionView("train", section_of(merged, "train"));

  const auto* task = scalar_of(merged, "task");
  const auto* stage = scalar_of(merged, "stage");
  if (!task || !stage) throw ConfigError("task and stage must be set");
  rc.task = parse_task(*task);
  rc.stage = parse_stage(*stage);
  const auto* dataset = scalar_of(merged, "dataset");
  if (!dataset || dataset->empty()) throw ConfigError("dataset must be set");
  rc.dataset = *dataset;

  const auto* log_name = scalar_of(merged, "log_name");
  if (!log_name || log_name->empty()) throw ConfigError("log_name must be non-empty");
  if (log_name->find('/') != std::string::npos || *log_name == "." || *log_name == "..") {
    throw ConfigError("log_name must be a plain directory name");
  }
  rc.log_name = *log_name;

  const auto registered = registered_models(rc.task, rc.stage);
  // Stages without registered models ignore the selection.
  if (!registered.empty()) rc.models = list_of(merged, "model");
  for (const auto& m : rc.models) {
    if (!contains(registered, m)) {
      throw ConfigError("model '" + m + "' is not available for " + to_string(rc.task) + " " +
                        to_string(rc.stage));
    }
  }
  if (rc.models.empty() && !registered.empty()) throw ConfigError("no model selected");
  // Only stages that produce rankings need K and metrics; the rest are
  // either data preparation or rejected at dispatch.
  const bool evaluates = !registered.empty() || rc.stage == Stage::evaluate;

  for (const auto& k : list_of(merged, "topk")) {
    const auto v = to_int(k, "topk");
    if (v <= 0) throw ConfigError("topk entries must be positive");
    rc.topk.push_back(static_cast<std::size_t>(v));
  }
  if (rc.topk.empty() && evaluates) throw ConfigError("topk must list at least one K");

  const auto allowed = rc.task == Task::recommendation ? std::span<const std::string_view>(kRecMetrics)
                                                        : std::span<const std::string_view>(kSearchMetrics);
  std::set<std::string> seen;
  for (const auto& m : list_of(merged, "metrics")) {
    if (!metrics::find_metric(m) || !contains(allowed, m)) {
      throw ConfigError("metric '" + m + "' is not available for " + to_string(rc.task));
    }
    if (seen.insert(m).second) rc.metrics.push_back(m);
  }
  if (rc.metrics.empty() && evaluates) throw ConfigError("metrics must not be empty");

  if (const auto* s = scalar_of(merged, "seed")) rc.seed = static_cast<std::uint64_t>(to_int(*s, "seed"));
  if (const auto* s = scalar_of(merged, "utility_mode")) {
    try {
      rc.utility_mode = parse_mode(*s);
    } catch (const Error&) {
      throw ConfigError("utility_mode must be exposure or click");
    }
  }
  if (const auto* s = scalar_of(merged, "arrival_order")) {
    if (*s != "id" && *s != "shuffle") throw ConfigError("arrival_order must be id or shuffle");
    rc.arrival_order = *s;
  }
  if (const auto* s = scalar_of(merged, "target_shares")) {
    if (*s != "uniform" && *s != "proportional") {
      throw ConfigError("target_shares must be uniform or proportional");
    }
    rc.target_shares = *s;
  }
  if (const auto* s = scalar_of(merged, "data_type")) {
    if (*s != "pair") throw ConfigError("data_type '" + *s + "' is not supported (pair only)");
    rc.data_type = *s;
  }
  if (const auto* s = scalar_of(merged, "fair-rank")) rc.fair_rank = to_bool(*s, "fair-rank");
  return rc;
}

ConfigMap merge_layers(const ConfigLayers& layers) {
  const auto dataset_file = layers.properties / "dataset" / (layers.dataset + ".yaml");
  if (!std::filesystem::exists(dataset_file)) {
    throw ConfigError("no dataset defaults at " + dataset_file.string());
  }
  ConfigMap flags{{"task", layers.task}, {"stage", layers.stage}, {"dataset", layers.dataset}};
  const ConfigMap dataset = load_config(dataset_file);
  ConfigMap stage;
  const auto stage_file = layers.properties / "stage" / layers.task / (layers.stage + ".yaml");
  if (std::filesystem::exists(stage_file)) stage = load_config(stage_file);
  const ConfigMap user = layers.user_file ? load_config(*layers.user_file) : ConfigMap{};

  const ConfigMap selection = merge(merge(merge(dataset, stage), user), flags);
  const auto registered = registered_models(parse_task(layers.task), parse_stage(layers.stage));
  ConfigMap merged = merge(dataset, stage);
  const auto selected = registered.empty() ? std::vector<std::string>{} : list_of(selection, "model");
  for (const auto& model : selected) {
    if (!contains(registered, model)) {
      throw ConfigError("model '" + model + "' is not available for " + layers.task + " " +
                        layers.stage);
    }
    const auto model_file = layers.properties / "models" / (model + ".yaml");
    if (std::filesystem::exists(model_file)) merged = merge(merged, load_config(model_file));
  }
  return merge(merge(merged, user), flags);
}

}  // namespace fairrank::pipeline
