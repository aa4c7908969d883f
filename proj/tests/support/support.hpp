#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "fairrank/core/catalog.hpp"
#include "fairrank/core/ranking_slate.hpp"
#include "fairrank/core/score_matrix.hpp"
#include "fairrank/ingest/judgments.hpp"
#include "fairrank/ingest/run_file.hpp"
#include "fairrank/ingest/split.hpp"

namespace fairrank::testing {

/// Fresh directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "fairrank");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::filesystem::path fixture_dir();

std::string slurp(const std::filesystem::path& path);
void spit(const std::filesystem::path& path, const std::string& content);

/// "u007"-style ids whose lexicographic order matches n.
std::string padded(char prefix, std::size_t n);

/// Catalog with users u0.., items i0.. and groups g0..; item_groups[i] lists
/// group numbers of item i.
Catalog make_catalog(std::size_t users, const std::vector<std::vector<std::size_t>>& item_groups,
                     std::size_t groups);

/// A catalog and a full score matrix (every user scores every item).
struct RecInstance {
  Catalog catalog;
  std::unique_ptr<ScoreMatrix> scores;
  std::size_t k = 1;
};

struct RecShape {
  std::size_t users = 10;
  std::size_t items = 20;
  std::size_t groups = 3;
  std::size_t k = 5;
  bool multi_group = false;  ///< some items join a second group
  bool coarse = false;       ///< scores on a 0.1 grid so ties occur
};

RecInstance make_instance(const RecShape& shape, std::mt19937_64& rng,
                          ScoreSemantics semantics = ScoreSemantics::probability);

/// Shape drawn within the given bounds (at least 1 user, 2 items, 1 group).
RecShape random_shape(std::mt19937_64& rng, std::size_t max_users, std::size_t max_items,
                      std::size_t max_groups, std::size_t max_k);

/// Exposure count per group for a slate set (item axis, unit slot weight).
std::vector<double> group_exposure(const RankingSlate& slates, const Catalog& catalog);

/// A small search instance: ranked run, priors and graded intent relevance.
struct SearchInstance {
  std::vector<ingest::RunEntry> run;
  std::vector<double> priors;
  std::vector<std::vector<double>> relevance;
};

SearchInstance make_search_instance(std::mt19937_64& rng, std::size_t docs, std::size_t intents,
                                    bool binary);

/// Query judgments from (doc, intent) pairs that are relevant.
ingest::QueryJudgments judgments(std::size_t intents,
                                 const std::vector<std::pair<std::string, std::size_t>>& relevant);

/// Two user clusters and two item clusters; every user interacts with every
/// item of its own cluster (timestamps shuffled), items carry their cluster
/// as group. Split 80/10/10.
ingest::SplitDataset planted_dataset(std::uint64_t seed, std::size_t users = 100,
                                     std::size_t items_per_cluster = 20);

/// Two item groups where group 0 draws `bias` of every user's interactions.
ingest::SplitDataset biased_dataset(std::uint64_t seed, double bias = 0.85);

/// |mean score of group-0 items - mean score of group-1 items| over all
/// scored (user, item) pairs.
double group_score_gap(const ScoreMatrix& scores, const Catalog& catalog);

namespace oracle {

// Independent reference computations. They favour obviousness over speed and
// share no code with the library.

std::vector<ItemIndex> sorted_prefix(const ScoreMatrix& scores, UserIndex u, std::size_t k);

double gini(const std::vector<double>& v);
double entropy(const std::vector<double>& v);

/// DCG of the ideal ordering found by trying every permutation of `docs`.
double alpha_ndcg_exhaustive(const std::vector<std::string>& ranking,
                             const std::vector<std::vector<int>>& rel_of_doc,
                             const std::vector<std::string>& docs, double alpha, std::size_t k);

/// Step-wise argmax of the xQuAD objective with original-rank tie-break.
std::vector<std::size_t> xquad(const SearchInstance& inst, double lambda, std::size_t k);

/// Step-wise PM2 with Sainte-Lague quotients; returns the selection order.
std::vector<std::size_t> pm2(const SearchInstance& inst, double lambda, std::size_t k,
                             std::vector<double>* seats = nullptr);

/// sum pi s + lambda sum_g (E_g + eps)^(1-alpha) / (1-alpha) over dense
/// policy rows indexed by item.
double welfare(const std::vector<std::vector<double>>& policy,
               const std::vector<std::vector<double>>& score,
               const std::vector<std::vector<std::size_t>>& item_groups, std::size_t groups,
               double lambda, double alpha, double eps);

}  // namespace oracle

}  // namespace fairrank::testing
