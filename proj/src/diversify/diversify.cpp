#include "fairrank/diversify/diversify.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fairrank/errors.hpp"

namespace fairrank::diversify {

void QueryPool::load_run(const std::vector<ingest::RunEntry>& run, std::size_t depth) {
  const std::size_t n = std::min(depth, run.size());
  std::unordered_set<std::string_view> seen;
  docs_.reserve(n);
  scores_.reserve(n);
  for (std::size_t d = 0; d < n; ++d) {
    if (!seen.insert(run[d].doc).second) {
      throw InvariantViolation("duplicate candidate doc '" + run[d].doc + "'");
    }
    docs_.push_back(run[d].doc);
    scores_.push_back(run[d].score);
  }
  if (n == 0) return;
  const auto [lo, hi] = std::minmax_element(scores_.begin(), scores_.end());
  const double min = *lo;
  const double range = *hi - *lo;
  for (double& s : scores_) s = range > 0.0 ? (s - min) / range : 0.5;
}

QueryPool::QueryPool(const std::vector<ingest::RunEntry>& run,
                     const ingest::QueryJudgments& judgments, std::size_t depth) {
  load_run(run, depth);
  priors_.assign(judgments.priors().begin(), judgments.priors().end());
  relevance_.assign(docs_.size(), std::vector<double>(priors_.size(), 0.0));
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    if (const auto* row = judgments.relevance_row(docs_[d])) {
      for (std::size_t i = 0; i < priors_.size(); ++i) relevance_[d][i] = (*row)[i];
    }
  }
}

QueryPool::QueryPool(const std::vector<ingest::RunEntry>& run, std::vector<double> priors,
                     IntentRelevance relevance, std::size_t depth)
    : priors_(std::move(priors)), relevance_(std::move(relevance)) {
  load_run(run, depth);
  double sum = 0.0;
  for (double p : priors_) {
    if (!(p >= 0.0)) throw InvariantViolation("intent priors must be >= 0");
    sum += p;
  }
  if (!priors_.empty() && std::abs(sum - 1.0) > 1e-9) {
    throw InvariantViolation("intent priors must sum to 1");
  }
  if (relevance_.size() < docs_.size()) {
    throw InvariantViolation("predicted relevance needs one row per pool doc");
  }
  relevance_.resize(docs_.size());
  for (const auto& row : relevance_) {
    if (row.size() != priors_.size()) throw InvariantViolation("one relevance value per intent");
    for (double r : row) {
      if (!(r >= 0.0 && r <= 1.0)) throw InvariantViolation("intent relevance must be in [0, 1]");
    }
  }
}

namespace {

void check(const QueryPool& pool, double lambda) {
  if (pool.size() == 0) throw EmptyCandidates("empty candidate pool");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("lambda must be in [0, 1]");
}

// First maximum in pool order among unselected docs.
template <typename Value>
std::size_t argmax_unselected(const QueryPool& pool, const std::vector<bool>& selected,
                              Value value) {
  std::size_t best = pool.size();
  double best_value = 0.0;
  for (std::size_t d = 0; d < pool.size(); ++d) {
    if (selected[d]) continue;
    const double v = value(d);
    if (best == pool.size() || v > best_value) {
      best = d;
      best_value = v;
    }
  }
  return best;
}

}  // namespace

std::vector<std::size_t> xquad(const QueryPool& pool, double lambda, std::size_t k) {
  check(pool, lambda);
  const std::size_t n = std::min(k, pool.size());
  std::vector<double> novelty(pool.num_intents(), 1.0);
  std::vector<bool> selected(pool.size(), false);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (order.size() < n) {
    const std::size_t d = argmax_unselected(pool, selected, [&](std::size_t c) {
      double diversity = 0.0;
      for (std::size_t i = 0; i < pool.num_intents(); ++i) {
        diversity += pool.prior(i) * pool.relevance(c, i) * novelty[i];
      }
      return (1.0 - lambda) * pool.score(c) + lambda * diversity;
    });
    selected[d] = true;
    order.push_back(d);
    for (std::size_t i = 0; i < pool.num_intents(); ++i) novelty[i] *= 1.0 - pool.relevance(d, i);
  }
  return order;
}

Pm2Outcome pm2(const QueryPool& pool, double lambda, std::size_t k) {
  check(pool, lambda);
  const std::size_t n = std::min(k, pool.size());
  const std::size_t m = pool.num_intents();
  Pm2Outcome out{{}, std::vector<double>(m, 0.0)};
  std::vector<double> quotient(m);
  std::vector<bool> selected(pool.size(), false);
  while (out.order.size() < n) {
    std::size_t top = 0;
    for (std::size_t i = 0; i < m; ++i) {
      quotient[i] = pool.prior(i) / (2.0 * out.seats[i] + 1.0);
      if (quotient[i] > quotient[top]) top = i;
    }
    const std::size_t d = argmax_unselected(pool, selected, [&](std::size_t c) {
      if (m == 0) return 0.0;
      double rest = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (i != top) rest += quotient[i] * pool.relevance(c, i);
      }
      return lambda * quotient[top] * pool.relevance(c, top) + (1.0 - lambda) * rest;
    });
    selected[d] = true;
    out.order.push_back(d);
    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) mass += pool.relevance(d, i);
    if (mass > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.seats[i] += pool.relevance(d, i) / mass;
    }
  }
  return out;
}

Method parse_method(std::string_view name) {
  if (name == "xquad") return Method::xquad;
  if (name == "pm2") return Method::pm2;
  throw InvalidArgument("unknown diversification method '" + std::string(name) + "'");
}

std::string to_string(Method m) { return m == Method::xquad ? "xquad" : "pm2"; }

ingest::RunList diversify_run(const ingest::RunList& run, const ingest::IntentJudgments& judgments,
                              const DiversifyParams& params) {
  ingest::RunList out;
  for (const auto& [qid, entries] : run.queries) {
    std::vector<std::string> docs;
    const auto found = judgments.queries.find(qid);
    if (found == judgments.queries.end()) {
      for (std::size_t d = 0; d < std::min(params.k, entries.size()); ++d) {
        docs.push_back(entries[d].doc);
      }
    } else {
      const QueryPool pool(entries, found->second, params.depth);
      const auto order = params.method == Method::xquad ? xquad(pool, params.lambda, params.k)
                                                        : pm2(pool, params.lambda, params.k).order;
      for (std::size_t d : order) docs.push_back(pool.doc(d));
    }
    out.queries.emplace(qid, ingest::entries_from_order(docs));
  }
  return out;
}

}  // namespace fairrank::diversify
