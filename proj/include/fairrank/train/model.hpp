#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairrank/core/catalog.hpp"
#include "fairrank/core/interaction_log.hpp"
#include "fairrank/core/score_matrix.hpp"

namespace fairrank::train {

/// Matrix-factorisation scorer s(u, i) = <p_u, q_i> (+ b_i).
class MFModel {
 public:
  MFModel() = default;
  /// Zero-initialised parameters.
  MFModel(std::size_t num_users, std::size_t num_items, std::size_t dim, bool item_bias);

  /// Gaussian N(0, std^2) embeddings from `seed`; biases start at 0.
  static MFModel gaussian(std::size_t num_users, std::size_t num_items, std::size_t dim,
                          bool item_bias, double std, std::uint64_t seed);

  std::size_t num_users() const { return num_users_; }
  std::size_t num_items() const { return num_items_; }
  std::size_t dim() const { return dim_; }
  bool has_bias() const { return has_bias_; }

  std::span<double> user(UserIndex u) { return {users_.data() + u * dim_, dim_}; }
  std::span<const double> user(UserIndex u) const { return {users_.data() + u * dim_, dim_}; }
  std::span<double> item(ItemIndex i) { return {items_.data() + i * dim_, dim_}; }
  std::span<const double> item(ItemIndex i) const { return {items_.data() + i * dim_, dim_}; }
  double& bias(ItemIndex i) { return bias_[i]; }
  double bias(ItemIndex i) const { return has_bias_ ? bias_[i] : 0.0; }

  double score(UserIndex u, ItemIndex i) const;

  /// True when every parameter is finite.
  bool finite() const;

  friend bool operator==(const MFModel&, const MFModel&) = default;

 private:
  std::size_t num_users_ = 0;
  std::size_t num_items_ = 0;
  std::size_t dim_ = 0;
  bool has_bias_ = false;
  std::vector<double> users_;
  std::vector<double> items_;
  std::vector<double> bias_;
};

/// Gradient of the triple loss with respect to the parameters it touches.
struct TripleGradient {
  std::vector<double> user;
  std::vector<double> pos;
  std::vector<double> neg;
  double pos_bias = 0.0;
  double neg_bias = 0.0;
};

/// -w ln sigmoid(s(u,i) - s(u,j)) + l2 (|p_u|^2 + |q_i|^2 + |q_j|^2 + b_i^2 + b_j^2).
double triple_loss(const MFModel& m, UserIndex u, ItemIndex pos, ItemIndex neg, double weight,
                   double l2);
TripleGradient triple_gradient(const MFModel& m, UserIndex u, ItemIndex pos, ItemIndex neg,
                               double weight, double l2);

/// Numerically stable ln(sigmoid(x)).
double log_sigmoid(double x);

/// Scores every catalog item for the listed users (all users when empty).
/// Rows of unlisted users stay empty. Items the user interacted with in
/// `exclude` are dropped. Throws UnknownEntity for an unknown user id and
/// InvalidArgument when the model does not match the catalog.
ScoreMatrix predict(const MFModel& model, const Catalog& catalog,
                    const std::vector<std::string>& users = {},
                    const InteractionLog* exclude = nullptr);

struct CheckpointInfo {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  std::string hooks;
};

/// Text checkpoint: a header line, then one line per user and item keyed by id.
void save_model(const MFModel& model, const Catalog& catalog, const CheckpointInfo& info,
                const std::filesystem::path& path);

/// Throws IoError, VersionError, or FormatError when the file or its ids do
/// not match `catalog`.
MFModel load_model(const std::filesystem::path& path, const Catalog& catalog,
                   CheckpointInfo* info = nullptr);

}  // namespace fairrank::train
