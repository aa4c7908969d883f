#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace fairrank::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path fixture_dir() { return FAIRRANK_FIXTURE_DIR; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string padded(char prefix, std::size_t n) {
  std::string digits = std::to_string(n);
  return std::string(1, prefix) + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') +
         digits;
}

Catalog make_catalog(std::size_t users, const std::vector<std::vector<std::size_t>>& item_groups,
                     std::size_t groups) {
  Catalog::Spec spec;
  for (std::size_t u = 0; u < users; ++u) spec.users.push_back({padded('u', u), {}});
  for (std::size_t g = 0; g < groups; ++g) spec.groups.push_back(padded('g', g));
  for (std::size_t i = 0; i < item_groups.size(); ++i) {
    spec.items.push_back({padded('i', i), {}});
    auto& gs = spec.item_groups[padded('i', i)];
    for (std::size_t g : item_groups[i]) gs.push_back(padded('g', g));
  }
  return Catalog(std::move(spec));
}

RecInstance make_instance(const RecShape& shape, std::mt19937_64& rng, ScoreSemantics semantics) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<std::size_t>> item_groups(shape.items);
  for (std::size_t i = 0; i < shape.items; ++i) {
    // Round-robin first group so every group has members.
    item_groups[i].push_back(i % shape.groups);
    if (shape.multi_group && shape.groups > 1 && unit(rng) < 0.3) {
      std::size_t extra = rng() % shape.groups;
      if (extra != item_groups[i][0]) item_groups[i].push_back(extra);
    }
  }
  RecInstance inst;
  inst.catalog = make_catalog(shape.users, item_groups, shape.groups);
  inst.k = shape.k;
  std::vector<std::vector<ScoredItem>> rows(shape.users);
  for (std::size_t u = 0; u < shape.users; ++u) {
    for (std::size_t i = 0; i < shape.items; ++i) {
      double s = unit(rng);
      if (shape.coarse) s = std::round(s * 10.0) / 10.0;
      rows[u].push_back({static_cast<ItemIndex>(i), s});
    }
  }
  inst.scores = std::make_unique<ScoreMatrix>(inst.catalog, std::move(rows), semantics);
  return inst;
}

RecShape random_shape(std::mt19937_64& rng, std::size_t max_users, std::size_t max_items,
                      std::size_t max_groups, std::size_t max_k) {
  auto draw = [&](std::size_t lo, std::size_t hi) { return lo + rng() % (hi - lo + 1); };
  RecShape s;
  s.users = draw(1, max_users);
  s.groups = draw(1, max_groups);
  s.items = draw(std::max<std::size_t>(2, s.groups), max_items);
  s.k = draw(1, std::min(max_k, s.items));
  s.multi_group = rng() % 2 == 0;
  s.coarse = rng() % 2 == 0;
  return s;
}

std::vector<double> group_exposure(const RankingSlate& slates, const Catalog& catalog) {
  std::vector<double> e(catalog.num_groups(), 0.0);
  for (const auto& slate : slates.slates()) {
    for (ItemIndex i : slate) {
      for (GroupIndex g : catalog.groups_of(i)) e[g] += 1.0;
    }
  }
  return e;
}

SearchInstance make_search_instance(std::mt19937_64& rng, std::size_t docs, std::size_t intents,
                                    bool binary) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SearchInstance inst;
  std::vector<double> scores(docs);
  for (double& s : scores) s = std::round(unit(rng) * 20.0) / 20.0;
  std::sort(scores.rbegin(), scores.rend());
  for (std::size_t d = 0; d < docs; ++d) {
    inst.run.push_back({"doc" + std::to_string(d), scores[d], static_cast<long long>(d + 1)});
  }
  double total = 0.0;
  for (std::size_t i = 0; i < intents; ++i) {
    inst.priors.push_back(1.0 + std::floor(unit(rng) * 3.0));
    total += inst.priors.back();
  }
  for (double& p : inst.priors) p /= total;
  inst.relevance.assign(docs, std::vector<double>(intents, 0.0));
  for (auto& row : inst.relevance) {
    for (double& r : row) {
      r = binary ? (unit(rng) < 0.4 ? 1.0 : 0.0) : std::round(unit(rng) * 4.0) / 4.0;
    }
  }
  return inst;
}

ingest::QueryJudgments judgments(std::size_t intents,
                                 const std::vector<std::pair<std::string, std::size_t>>& relevant) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= intents; ++i) names.push_back(std::to_string(i));
  ingest::QueryJudgments j(names);
  for (const auto& [doc, intent] : relevant) j.judge(std::to_string(intent), doc, 1);
  return j;
}

ingest::SplitDataset planted_dataset(std::uint64_t seed, std::size_t users,
                                     std::size_t items_per_cluster) {
  std::mt19937_64 rng(seed);
  InteractionLog log;
  ingest::GroupMembership groups;
  const std::size_t items = 2 * items_per_cluster;
  for (std::size_t i = 0; i < items; ++i) groups.item_groups[padded('i', i)] = {padded('g', i % 2)};
  for (std::size_t u = 0; u < users; ++u) {
    std::vector<std::size_t> own;
    for (std::size_t i = u % 2; i < items; i += 2) own.push_back(i);
    std::shuffle(own.begin(), own.end(), rng);
    for (std::size_t t = 0; t < own.size(); ++t) {
      log.records.push_back({padded('u', u), padded('i', own[t]), 1.0, static_cast<std::int64_t>(t)});
    }
  }
  return ingest::filter_and_split(log, groups);
}

ingest::SplitDataset biased_dataset(std::uint64_t seed, double bias) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution popular(bias);
  InteractionLog log;
  ingest::GroupMembership groups;
  const std::size_t items = 40;
  for (std::size_t i = 0; i < items; ++i) groups.item_groups[padded('i', i)] = {padded('g', i % 2)};
  for (std::size_t u = 0; u < 80; ++u) {
    std::vector<bool> used(items, false);
    for (std::int64_t t = 0; t < 12; ++t) {
      std::size_t i;
      do {
        i = 2 * (rng() % (items / 2)) + (popular(rng) ? 0 : 1);
      } while (used[i]);
      used[i] = true;
      log.records.push_back({padded('u', u), padded('i', i), 1.0, t});
    }
  }
  return ingest::filter_and_split(log, groups);
}

double group_score_gap(const ScoreMatrix& scores, const Catalog& catalog) {
  double sum[2] = {0.0, 0.0};
  double count[2] = {0.0, 0.0};
  for (UserIndex u = 0; u < scores.num_users(); ++u) {
    for (const auto& e : scores.row(u)) {
      const GroupIndex g = catalog.groups_of(e.item)[0];
      sum[g] += e.score;
      count[g] += 1.0;
    }
  }
  return std::abs(sum[0] / count[0] - sum[1] / count[1]);
}

namespace oracle {

std::vector<ItemIndex> sorted_prefix(const ScoreMatrix& scores, UserIndex u, std::size_t k) {
  std::vector<std::pair<double, ItemIndex>> all;
  for (const auto& e : scores.row(u)) all.emplace_back(e.score, e.item);
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<ItemIndex> out;
  for (std::size_t r = 0; r < std::min(k, all.size()); ++r) out.push_back(all[r].second);
  return out;
}

double gini(const std::vector<double>& v) {
  double pairs = 0.0;
  double total = 0.0;
  for (double a : v) {
    total += a;
    for (double b : v) pairs += std::abs(a - b);
  }
  if (total == 0.0) return 0.0;
  return pairs / (2.0 * static_cast<double>(v.size()) * total);
}

double entropy(const std::vector<double>& v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  double h = 0.0;
  for (double a : v) {
    if (a > 0.0) h -= a / total * std::log(a / total);
  }
  return h;
}

namespace {

double alpha_dcg(const std::vector<std::vector<int>>& rels, double alpha, std::size_t k) {
  const std::size_t m = rels.empty() ? 0 : rels[0].size();
  std::vector<int> seen(m, 0);
  double dcg = 0.0;
  for (std::size_t r = 0; r < std::min(k, rels.size()); ++r) {
    double gain = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      gain += rels[r][i] * std::pow(1.0 - alpha, seen[i]);
      seen[i] += rels[r][i];
    }
    dcg += gain / std::log2(static_cast<double>(r) + 2.0);
  }
  return dcg;
}

}  // namespace

double alpha_ndcg_exhaustive(const std::vector<std::string>& ranking,
                             const std::vector<std::vector<int>>& rel_of_doc,
                             const std::vector<std::string>& docs, double alpha, std::size_t k) {
  const std::size_t m = rel_of_doc.empty() ? 0 : rel_of_doc[0].size();
  auto rel = [&](const std::string& doc) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (docs[d] == doc) return rel_of_doc[d];
    }
    return std::vector<int>(m, 0);
  };
  std::vector<std::vector<int>> actual;
  for (const auto& doc : ranking) actual.push_back(rel(doc));
  std::vector<std::size_t> perm(docs.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    std::vector<std::vector<int>> rows;
    for (std::size_t d : perm) rows.push_back(rel_of_doc[d]);
    best = std::max(best, alpha_dcg(rows, alpha, k));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best > 0.0 ? alpha_dcg(actual, alpha, k) / best : 0.0;
}

namespace {

std::vector<double> normalised(const SearchInstance& inst) {
  double lo = inst.run[0].score;
  double hi = inst.run[0].score;
  for (const auto& e : inst.run) {
    lo = std::min(lo, e.score);
    hi = std::max(hi, e.score);
  }
  std::vector<double> s;
  for (const auto& e : inst.run) s.push_back(hi > lo ? (e.score - lo) / (hi - lo) : 0.5);
  return s;
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

std::vector<std::size_t> xquad(const SearchInstance& inst, double lambda, std::size_t k) {
  const auto s = normalised(inst);
  const std::size_t n = inst.run.size();
  const std::size_t m = inst.priors.size();
  std::vector<std::size_t> chosen;
  while (chosen.size() < std::min(k, n)) {
    std::vector<double> value(n, -INFINITY);
    for (std::size_t d = 0; d < n; ++d) {
      if (contains(chosen, d)) continue;
      double div = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double uncovered = 1.0;
        for (std::size_t c : chosen) uncovered *= 1.0 - inst.relevance[c][i];
        div += inst.priors[i] * inst.relevance[d][i] * uncovered;
      }
      value[d] = (1.0 - lambda) * s[d] + lambda * div;
    }
    chosen.push_back(static_cast<std::size_t>(
        std::max_element(value.begin(), value.end()) - value.begin()));
  }
  return chosen;
}

std::vector<std::size_t> pm2(const SearchInstance& inst, double lambda, std::size_t k,
                             std::vector<double>* seats_out) {
  const std::size_t n = inst.run.size();
  const std::size_t m = inst.priors.size();
  std::vector<double> seats(m, 0.0);
  std::vector<std::size_t> chosen;
  while (chosen.size() < std::min(k, n)) {
    std::vector<double> qt(m);
    for (std::size_t i = 0; i < m; ++i) qt[i] = inst.priors[i] / (2.0 * seats[i] + 1.0);
    const std::size_t star =
        static_cast<std::size_t>(std::max_element(qt.begin(), qt.end()) - qt.begin());
    std::vector<double> value(n, -INFINITY);
    for (std::size_t d = 0; d < n; ++d) {
      if (contains(chosen, d)) continue;
      double others = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (i != star) others += qt[i] * inst.relevance[d][i];
      }
      value[d] = lambda * qt[star] * inst.relevance[d][star] + (1.0 - lambda) * others;
    }
    const std::size_t pick =
        static_cast<std::size_t>(std::max_element(value.begin(), value.end()) - value.begin());
    chosen.push_back(pick);
    const double mass =
        std::accumulate(inst.relevance[pick].begin(), inst.relevance[pick].end(), 0.0);
    if (mass > 0.0) {
      for (std::size_t i = 0; i < m; ++i) seats[i] += inst.relevance[pick][i] / mass;
    }
  }
  if (seats_out) *seats_out = seats;
  return chosen;
}

double welfare(const std::vector<std::vector<double>>& policy,
               const std::vector<std::vector<double>>& score,
               const std::vector<std::vector<std::size_t>>& item_groups, std::size_t groups,
               double lambda, double alpha, double eps) {
  double relevance = 0.0;
  std::vector<double> mass(groups, 0.0);
  for (std::size_t u = 0; u < policy.size(); ++u) {
    for (std::size_t i = 0; i < policy[u].size(); ++i) {
      relevance += policy[u][i] * score[u][i];
      for (std::size_t g : item_groups[i]) mass[g] += policy[u][i];
    }
  }
  double welfare = 0.0;
  for (double e : mass) welfare += std::pow(e + eps, 1.0 - alpha) / (1.0 - alpha);
  return relevance + lambda * welfare;
}

}  // namespace oracle

}  // namespace fairrank::testing
