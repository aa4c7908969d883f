#include "fairrank/synth/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "fairrank/errors.hpp"
#include "fairrank/ingest/canonical_io.hpp"
#include "fairrank/ingest/text_table.hpp"

namespace fairrank::synth {

namespace fs = std::filesystem;

namespace {

// Zero-padded ids keep lexicographic and numeric order identical.
std::string make_id(char prefix, std::size_t n, std::size_t width) {
  std::string digits = std::to_string(n);
  return std::string(1, prefix) + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

std::size_t digits(std::size_t n) { return std::to_string(n > 0 ? n - 1 : 0).size(); }

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

ingest::SplitDataset generate_recommendation(const RecSpec& spec, const fs::path& dir) {
  if (spec.users == 0 || spec.items == 0 || spec.groups == 0 || spec.groups > spec.items) {
    throw InvalidArgument("synthetic dataset needs users, items and 1..items groups");
  }
  if (spec.interactions_per_user == 0 || spec.interactions_per_user >= spec.items) {
    throw InvalidArgument("interactions per user must be in [1, items)");
  }
  make_dir(dir);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double norm = 1.0 / std::sqrt(static_cast<double>(spec.dim));

  std::vector<std::vector<double>> user_f(spec.users, std::vector<double>(spec.dim));
  std::vector<std::vector<double>> item_f(spec.items, std::vector<double>(spec.dim));
  for (auto& v : user_f) for (double& x : v) x = normal(rng);
  for (auto& v : item_f) for (double& x : v) x = normal(rng) * norm;
  std::vector<std::size_t> group_of(spec.items);
  for (std::size_t i = 0; i < spec.items; ++i) group_of[i] = i % spec.groups;
  std::vector<double> boost(spec.groups);
  for (std::size_t g = 0; g < spec.groups; ++g) {
    boost[g] = spec.skew * std::log(static_cast<double>(g + 1));
  }
  auto affinity = [&](std::size_t u, std::size_t i) {
    double s = boost[group_of[i]];
    for (std::size_t f = 0; f < spec.dim; ++f) s += user_f[u][f] * item_f[i][f];
    return s;
  };

  const std::size_t uw = digits(spec.users), iw = digits(spec.items), gw = digits(spec.groups);
  std::ostringstream inter;
  inter << "user_id\titem_id\tlabel\ttimestamp\n";
  InteractionLog log;
  std::vector<double> weight(spec.items);
  for (std::size_t u = 0; u < spec.users; ++u) {
    for (std::size_t i = 0; i < spec.items; ++i) weight[i] = std::exp(affinity(u, i));
    std::set<std::size_t> chosen;
    std::int64_t t = 0;  // per-user clock
    while (chosen.size() < spec.interactions_per_user) {
      std::discrete_distribution<std::size_t> pick(weight.begin(), weight.end());
      const std::size_t i = pick(rng);
      weight[i] = 0.0;
      chosen.insert(i);
      Interaction rec{make_id('u', u, uw), make_id('i', i, iw), 1.0, ++t};
      inter << rec.user << '\t' << rec.item << "\t1\t" << rec.timestamp << '\n';
      log.records.push_back(std::move(rec));
    }
  }
  ingest::write_text(dir / "interactions.tsv", inter.str());

  ingest::GroupMembership membership;
  std::ostringstream groups;
  for (std::size_t i = 0; i < spec.items; ++i) {
    const std::string g = make_id('g', group_of[i], gw);
    groups << make_id('i', i, iw) << '\t' << g << '\n';
    membership.item_groups[make_id('i', i, iw)] = {g};
  }
  ingest::write_text(dir / "item_groups.tsv", groups.str());

  const ingest::SplitSpec split_spec{std::min<std::size_t>(5, spec.interactions_per_user), {0.8, 0.1, 0.1}};
  auto data = ingest::filter_and_split(log, membership, split_spec);
  ingest::write_dataset(data, dir / "processed");

  const Catalog& cat = data.catalog;
  std::vector<std::set<ItemIndex>> known(cat.num_users());
  for (const auto* part : {&data.train, &data.valid}) {
    for (const auto& r : part->records) known[cat.user_index(r.user)].insert(cat.item_index(r.item));
  }
  std::vector<std::vector<ScoredItem>> rows(cat.num_users());
  for (UserIndex u = 0; u < cat.num_users(); ++u) {
    const std::size_t raw_u = std::stoul(cat.user_id(u).substr(1));
    for (ItemIndex i = 0; i < cat.num_items(); ++i) {
      if (known[u].count(i)) continue;
      const std::size_t raw_i = std::stoul(cat.item_id(i).substr(1));
      const double s = 1.0 / (1.0 + std::exp(-(affinity(raw_u, raw_i) - 1.0)));
      // Coarse grid so ties occur and tie rules are exercised.
      rows[u].push_back({i, std::round(s * 1e4) / 1e4});
    }
  }
  const ScoreMatrix scores(cat, std::move(rows), ScoreSemantics::probability);
  ingest::write_scores(scores, cat, dir / "processed" / "scores.tsv");
  return data;
}

void generate_search(const SearchSpec& spec, const fs::path& dir) {
  if (spec.min_intents == 0 || spec.min_intents > spec.max_intents || spec.docs_per_query == 0) {
    throw InvalidArgument("bad search generator spec");
  }
  make_dir(dir);
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> intents_dist(spec.min_intents, spec.max_intents);
  std::bernoulli_distribution relevant(spec.relevance_rate);
  std::uniform_real_distribution<double> noise(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> any_doc(0, spec.docs_per_query - 1);
  const std::size_t dw = digits(spec.docs_per_query);

  std::ostringstream run;
  std::ostringstream qrels;
  for (std::size_t q = 1; q <= spec.queries; ++q) {
    const std::string qid = std::to_string(q);
    const std::size_t m = intents_dist(rng);
    std::vector<std::vector<int>> rel(spec.docs_per_query, std::vector<int>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
      bool any = false;
      for (auto& row : rel) {
        row[i] = relevant(rng) ? 1 : 0;
        any |= row[i] == 1;
      }
      if (!any) rel[any_doc(rng)][i] = 1;
    }
    std::vector<std::pair<double, std::string>> scored;
    for (std::size_t d = 0; d < spec.docs_per_query; ++d) {
      const std::string doc = "clueweb09-q" + qid + "-" + make_id('d', d, dw);
      double covered = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        covered += rel[d][i];
        qrels << qid << ' ' << (i + 1) << ' ' << doc << ' ' << rel[d][i] << '\n';
      }
      scored.emplace_back(-(covered + 2.0 * noise(rng)), doc);
    }
    std::sort(scored.begin(), scored.end());
    for (std::size_t r = 0; r < scored.size(); ++r) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", -scored[r].first);
      run << qid << " Q0 " << scored[r].second << ' ' << (r + 1) << ' ' << buf << " synth\n";
    }
  }
  ingest::write_text(dir / "run.txt", run.str());
  ingest::write_text(dir / "qrels.txt", qrels.str());
}

}  // namespace fairrank::synth
