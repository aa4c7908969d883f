#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fairrank/ingest/split.hpp"
#include "fairrank/train/hooks.hpp"
#include "fairrank/train/model.hpp"

namespace fairrank::train {

struct TrainConfig {
  std::size_t dim = 32;
  std::size_t epochs = 50;
  double learning_rate = 0.05;
  double l2 = 1e-4;
  std::size_t batch_size = 256;
  std::uint64_t seed = 2024;
  bool item_bias = false;
  double init_std = 0.1;
};

enum class WeightProvider { static_weight, ips, fairdual };
enum class GroupSampler { uniform, minmax };

WeightProvider parse_weight_provider(std::string_view name);
GroupSampler parse_group_sampler(std::string_view name);
std::string to_string(WeightProvider w);
std::string to_string(GroupSampler s);

struct TrainHooks {
  WeightProvider weights = WeightProvider::static_weight;
  GroupSampler sampler = GroupSampler::uniform;
  PenaltyKind regularizer = PenaltyKind::none;
  double penalty_weight = 0.0;  ///< lambda_f
  double static_weight = 1.0;
  double ips_smoothing = 0.0;
  double dual_budget = 1.0;     ///< fairdual lambda
  double dual_step = 0.1;       ///< fairdual eta
  double sampler_eta = 1.0;     ///< minmax eta_s

  /// Short description for checkpoints and reports.
  std::string describe() const;
};

struct TrainResult {
  MFModel model;
  std::vector<double> loss_curve;  ///< mean objective per triple, per epoch
  std::vector<double> final_duals;  ///< fairdual prices, empty otherwise
  std::vector<double> final_sampler;  ///< minmax probabilities, empty otherwise
};

/// Mini-batch BPR over the train split: one uniformly drawn negative per
/// positive (label > 0), redrawn while it collides with the user's positives.
/// Each batch accumulates the gradient of
///   sum_triples loss + lambda_f * penalty(batch positive scores)
/// at fixed parameters and applies it once. Hooks observe batch statistics
/// at batch boundaries. Deterministic for a seed. Throws EmptyDataset for an
/// empty train split, DivergenceError naming the epoch on a non-finite loss.
TrainResult train(const ingest::SplitDataset& data, const TrainConfig& config,
                  const TrainHooks& hooks = {});

/// Hook-free reference implementation of plain BPR. Bit-identical to
/// train() with default hooks for the same config.
TrainResult train_bpr(const ingest::SplitDataset& data, const TrainConfig& config);

/// Fraction of correctly ordered (positive, negative) pairs over `log`, with
/// negatives every item the user has in neither `log` nor `known`.
/// Users without positives or negatives are skipped.
double pairwise_auc(const MFModel& model, const Catalog& catalog, const InteractionLog& log,
                    const InteractionLog& known);

}  // namespace fairrank::train
