#pragma once

#include <filesystem>

#include "fairrank/core/catalog.hpp"
#include "fairrank/core/score_matrix.hpp"
#include "fairrank/ingest/split.hpp"

namespace fairrank::ingest {

inline constexpr int kDatasetFormatVersion = 1;

/// Writes the dataset as line-oriented tables plus `manifest.tsv`:
///
///   manifest.tsv     key<TAB>value (format, version, split spec, counts)
///   groups.tsv       group_id
///   users.tsv        user_id<TAB>attributes-json
///   items.tsv        item_id<TAB>group|group<TAB>attributes-json
///   user_groups.tsv  user_id<TAB>group_id (only with user groups)
///   train.tsv, valid.tsv, test.tsv   user_id item_id label timestamp
///
/// Creates `dir` if needed. Throws IoError, or InvalidArgument for ids that
/// contain tabs, newlines or (for groups) '|'.
void write_dataset(const SplitDataset& dataset, const std::filesystem::path& dir);

/// Inverse of write_dataset. Throws IoError when the manifest is missing,
/// VersionError on a format/version mismatch, ParseError on bad content.
SplitDataset read_dataset(const std::filesystem::path& dir);

/// `# semantics<TAB>raw|probability`, a header line, then
/// `user_id<TAB>item_id<TAB>score` rows in user and item order.
void write_scores(const ScoreMatrix& scores, const Catalog& catalog,
                  const std::filesystem::path& path);

/// Rows for users or items not in `catalog` raise UnknownEntity.
ScoreMatrix read_scores(const std::filesystem::path& path, const Catalog& catalog);

}  // namespace fairrank::ingest
