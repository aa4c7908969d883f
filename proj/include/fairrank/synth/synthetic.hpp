#pragma once

#include <cstdint>
#include <filesystem>

#include "fairrank/ingest/split.hpp"

namespace fairrank::synth {

struct RecSpec {
  std::size_t users = 1000;
  std::size_t items = 500;
  std::size_t groups = 10;
  std::size_t interactions_per_user = 20;
  std::size_t dim = 8;
  /// Popularity tilt: group g draws interactions with weight (g + 1)^skew.
  double skew = 1.0;
  std::uint64_t seed = 7;
};

/// Writes a recommendation dataset into `dir`:
///   interactions.tsv, item_groups.tsv   raw inputs for the process stage
///   processed/                          the split canonical dataset
///   processed/scores.tsv                click probabilities for every
///                                       (user, item) pair outside train/valid
/// Users prefer items through latent factors; popular groups get more
/// interactions and higher scores. Returns the split dataset.
ingest::SplitDataset generate_recommendation(const RecSpec& spec, const std::filesystem::path& dir);

struct SearchSpec {
  std::size_t queries = 50;
  std::size_t docs_per_query = 100;
  std::size_t min_intents = 3;
  std::size_t max_intents = 8;
  double relevance_rate = 0.15;  ///< chance a doc is relevant to a given intent
  std::uint64_t seed = 11;
};

/// Writes run.txt (TREC run) and qrels.txt (`qid intent doc rel`) into `dir`.
/// Every query gets between min_intents and max_intents intents, each with
/// at least one relevant doc; run scores favour relevant docs.
void generate_search(const SearchSpec& spec, const std::filesystem::path& dir);

}  // namespace fairrank::synth
