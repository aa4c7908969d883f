#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairrank/ingest/text_table.hpp"

namespace fairrank::ingest {

/// Intent-level binary judgments of one query.
class QueryJudgments {
 public:
  QueryJudgments() = default;
  /// Declares `intents` (natural order, duplicates removed) with uniform priors.
  explicit QueryJudgments(std::vector<std::string> intents);

  std::span<const std::string> intents() const { return intents_; }
  std::span<const double> priors() const { return priors_; }
  std::size_t num_intents() const { return intents_.size(); }
  std::optional<std::size_t> intent_index(std::string_view intent) const;

  /// Replaces the priors. Throws InvariantViolation unless they are
  /// non-negative, one per intent and sum to 1 within 1e-9.
  void set_priors(std::vector<double> priors);

  /// Records J(doc, intent) in {0, 1}; returns true when the stored value
  /// changed. Throws InvariantViolation for an undeclared intent.
  bool judge(std::string_view intent, std::string_view doc, int relevance);

  /// J(doc, intent); 0 for unjudged pairs.
  int relevance(std::string_view doc, std::size_t intent) const;

  /// Per-intent relevance of a judged doc, or nullptr.
  const std::vector<std::uint8_t>* relevance_row(std::string_view doc) const;

  /// Docs relevant to at least one intent, in doc-id order.
  std::vector<std::string> relevant_docs() const;

  const std::map<std::string, std::vector<std::uint8_t>, std::less<>>& judged() const {
    return judged_;
  }

 private:
  std::vector<std::string> intents_;
  std::vector<double> priors_;
  std::map<std::string, std::vector<std::uint8_t>, std::less<>> judged_;
};

struct IntentJudgments {
  std::map<std::string, QueryJudgments, NaturalLess> queries;
  /// Lines that repeated an earlier (query, intent, doc) key.
  std::size_t duplicate_lines = 0;

  /// Throws UnknownQuery.
  const QueryJudgments& query(std::string_view qid) const;
};

/// Parses `qid intent_id doc_id rel` lines (whitespace separated). Each
/// query's intents are the ones named on its lines; priors start uniform.
/// A repeated key keeps the last value and bumps `duplicate_lines`.
/// Throws ParseError for rel outside {0, 1} or a malformed line.
IntentJudgments parse_diversity_qrels(const std::filesystem::path& path);

}  // namespace fairrank::ingest
