#include "fairrank/pipeline/runner.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ostream>
#include <set>

#include "fairrank/diversify/diversify.hpp"
#include "fairrank/errors.hpp"
#include "fairrank/ingest/canonical_io.hpp"
#include "fairrank/ingest/interactions.hpp"
#include "fairrank/metrics/accuracy.hpp"
#include "fairrank/metrics/distribution.hpp"
#include "fairrank/metrics/diversity.hpp"
#include "fairrank/rerank/rerankers.hpp"
#include "fairrank/train/trainer.hpp"

namespace fairrank::pipeline {

namespace fs = std::filesystem;

namespace {

bool wants(const RunConfig& c, std::string_view metric) {
  return std::find(c.metrics.begin(), c.metrics.end(), metric) != c.metrics.end();
}

fs::path resolve(const fs::path& base, const std::string& file) {
  const fs::path p(file);
  return p.is_absolute() ? p : base / p;
}

char parse_delimiter(const std::string& text) {
  if (text == "tab" || text == "\\t" || text == "\t") return '\t';
  if (text == "comma") return ',';
  if (text.size() == 1) return text[0];
  throw ConfigError("data.delimiter must be a single character, 'tab' or 'comma'");
}

std::size_t positive_int(const SectionView& s, std::string_view key, std::int64_t fallback) {
  const auto v = s.get_int(key, fallback);
  if (v < 0) throw ConfigError("'" + std::string(key) + "' must be >= 0");
  return static_cast<std::size_t>(v);
}

// Recommendation metrics of one slate set.
void evaluate_slates(const RunConfig& c, const RankingSlate& slates, const ScoreMatrix& scores,
                     const ingest::SplitDataset& data, const metrics::RelevantItems& relevant,
                     std::size_t k, ReportRow& row, AllocationRow& alloc) {
  if (wants(c, "ndcg")) row.values["ndcg"] = metrics::ndcg_at_k(slates, relevant, k);
  if (wants(c, "mrr")) row.values["mrr"] = metrics::mrr_at_k(slates, relevant, k);
  if (wants(c, "hr")) row.values["hr"] = metrics::hit_at_k(slates, relevant, k);
  if (wants(c, "r_ndcg") || wants(c, "u_loss")) {
    const auto q = metrics::rerank_quality(slates, scores, k);
    if (wants(c, "r_ndcg")) row.values["r_ndcg"] = q.r_ndcg;
    if (wants(c, "u_loss")) row.values["u_loss"] = q.u_loss;
  }
  const auto utility =
      group_utility(slates, scores, data.catalog, UtilityAxis::item, c.utility_mode);
  if (wants(c, "mmf")) row.values["mmf"] = metrics::mmf(utility);
  if (wants(c, "gini")) row.values["gini"] = metrics::gini(utility);
  if (wants(c, "entropy")) row.values["entropy"] = metrics::entropy(utility);
  if (wants(c, "min_max_ratio")) row.values["min_max_ratio"] = metrics::min_max_ratio(utility);
  alloc.axis = std::string(to_string(utility.axis));
  alloc.mode = std::string(to_string(utility.mode));
  for (GroupIndex g = 0; g < utility.values.size(); ++g) {
    alloc.groups.emplace_back(data.catalog.group_id(g), utility.values[g]);
  }
}

rerank::RerankContext make_context(const RunConfig& c, const ScoreMatrix& scores,
                                   const Catalog& catalog, std::size_t k) {
  rerank::RerankContext ctx(scores, catalog, k, c.utility_mode);
  if (c.arrival_order == "shuffle") ctx.set_arrival_order(rerank::shuffled_arrival(catalog.num_users(), c.seed));
  if (c.target_shares == "proportional") ctx.set_target_shares(rerank::proportional_shares(catalog));
  return ctx;
}

RankingSlate rerank_with(const RunConfig& c, const std::string& model,
                         const rerank::RerankContext& ctx) {
  const SectionView& p = c.params(model);
  if (model == "base") return rerank::topk(ctx);
  if (model == "min_regularizer") return rerank::min_regularizer(ctx, p.get_double("lambda", 1.0));
  if (model == "cpfair") {
    rerank::CpFairParams cp;
    cp.lambda = p.get_double("lambda", cp.lambda);
    cp.swap_budget = positive_int(p, "swap_budget", static_cast<std::int64_t>(cp.swap_budget));
    return rerank::cpfair(ctx, cp);
  }
  if (model == "fairrec") return rerank::fairrec(ctx, p.get_double("phi", 1.0)).slates;
  if (model == "pmmf") {
    rerank::PmmfParams pp;
    pp.lambda = p.get_double("lambda", pp.lambda);
    pp.eta = p.get_double("eta", pp.eta);
    return rerank::pmmf(ctx, pp).slates;
  }
  if (model == "welf") {
    rerank::WelfParams wp;
    wp.lambda = p.get_double("lambda", wp.lambda);
    wp.alpha = p.get_double("alpha", wp.alpha);
    wp.iterations = positive_int(p, "iterations", static_cast<std::int64_t>(wp.iterations));
    wp.smoothing = p.get_double("smoothing", wp.smoothing);
    return rerank::welf(ctx, wp).slates;
  }
  throw ConfigError("model '" + model + "' is not a re-ranker");
}

train::TrainHooks hooks_for(const RunConfig& c, const std::string& model) {
  train::TrainHooks h;
  if (!c.fair_rank) return h;
  const SectionView& p = c.params(model);
  if (model == "ips") {
    h.weights = train::WeightProvider::ips;
    h.ips_smoothing = p.get_double("smoothing", 0.0);
  } else if (model == "fairdual") {
    h.weights = train::WeightProvider::fairdual;
    h.dual_budget = p.get_double("lambda", h.dual_budget);
    h.dual_step = p.get_double("eta", h.dual_step);
  } else if (model == "minmax") {
    h.sampler = train::GroupSampler::minmax;
    h.sampler_eta = p.get_double("eta", h.sampler_eta);
  } else if (model == "reg" || model == "focf") {
    h.regularizer = train::parse_penalty(model);
    h.penalty_weight = p.get_double("lambda_f", 1.0);
  }
  return h;
}

train::TrainConfig train_config(const RunConfig& c) {
  train::TrainConfig t;
  t.dim = positive_int(c.train, "dim", static_cast<std::int64_t>(t.dim));
  t.epochs = positive_int(c.train, "epochs", static_cast<std::int64_t>(t.epochs));
  t.learning_rate = c.train.get_double("learning_rate", t.learning_rate);
  t.l2 = c.train.get_double("l2", t.l2);
  t.batch_size = positive_int(c.train, "batch_size", static_cast<std::int64_t>(t.batch_size));
  t.item_bias = c.train.get_bool("item_bias", t.item_bias);
  t.init_std = c.train.get_double("init_std", t.init_std);
  t.seed = c.seed;
  return t;
}

fs::path processed_dir(const RunConfig& c, const fs::path& dataset_dir) {
  return resolve(dataset_dir, c.data.get_string("processed_dir", "processed"));
}

void process_recommendation(const RunConfig& c, const fs::path& dataset_dir,
                            BenchmarkReport& report) {
  ingest::ColumnSpec cols;
  cols.user = c.data.get_string("user_column", cols.user);
  cols.item = c.data.get_string("item_column", cols.item);
  cols.label = c.data.get_string("label_column", cols.label);
  cols.timestamp = c.data.get_string("timestamp_column", cols.timestamp);
  cols.delimiter = parse_delimiter(c.data.get_string("delimiter", "tab"));
  const auto log = ingest::parse_interactions(
      resolve(dataset_dir, c.data.get_string("interactions_file", "interactions.tsv")), cols);
  ingest::GroupMembership membership;
  membership.item_groups = ingest::parse_item_groups(
      resolve(dataset_dir, c.data.get_string("item_groups_file", "item_groups.tsv")));
  if (c.data.has("user_groups_file")) {
    membership.user_groups = ingest::parse_user_groups(
        resolve(dataset_dir, c.data.get_string("user_groups_file", "")));
  }
  ingest::SplitSpec spec;
  spec.min_interactions = positive_int(c.data, "min_interactions",
                                       static_cast<std::int64_t>(spec.min_interactions));
  const auto ratios = c.data.get_doubles("split_ratios", {0.8, 0.1, 0.1});
  if (ratios.size() != 3) throw ConfigError("data.split_ratios needs three values");
  std::copy(ratios.begin(), ratios.end(), spec.ratios.begin());

  const auto split = ingest::filter_and_split(log, membership, spec);
  ingest::write_dataset(split, processed_dir(c, dataset_dir));
  report.summary = {
      {"records_in", std::to_string(log.size())},
      {"records_kept", std::to_string(split.total_records())},
      {"train", std::to_string(split.train.size())},
      {"valid", std::to_string(split.valid.size())},
      {"test", std::to_string(split.test.size())},
      {"users", std::to_string(split.catalog.num_users())},
      {"items", std::to_string(split.catalog.num_items())},
      {"groups", std::to_string(split.catalog.num_groups())},
  };
}

void process_search(const RunConfig& c, const fs::path& dataset_dir, BenchmarkReport& report) {
  const auto depth = positive_int(c.data, "run_depth", ingest::kDefaultRunDepth);
  const auto run = ingest::parse_run_file(
      resolve(dataset_dir, c.data.get_string("run_file", "run.txt")), depth);
  const auto qrels =
      ingest::parse_diversity_qrels(resolve(dataset_dir, c.data.get_string("qrels_file", "qrels.txt")));
  const fs::path out = processed_dir(c, dataset_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());
  ingest::write_run_file(run, out / "run.txt", "input");

  std::size_t fewest = 0, most = 0;
  bool first = true;
  for (const auto& [qid, q] : qrels.queries) {
    fewest = first ? q.num_intents() : std::min(fewest, q.num_intents());
    most = std::max(most, q.num_intents());
    first = false;
  }
  report.summary = {
      {"queries_in_run", std::to_string(run.queries.size())},
      {"queries_judged", std::to_string(qrels.queries.size())},
      {"intents_per_query", std::to_string(fewest) + "-" + std::to_string(most)},
      {"duplicate_judgments", std::to_string(qrels.duplicate_lines)},
  };
}

void recommendation_rows(const RunConfig& c, const std::string& model, const ScoreMatrix& scores,
                         const ingest::SplitDataset& data, BenchmarkReport& report,
                         bool rerank) {
  const auto relevant = metrics::relevant_from_log(data.test, data.catalog);
  for (std::size_t k : c.topk) {
    const auto ctx = make_context(c, scores, data.catalog, k);
    const RankingSlate slates = rerank ? rerank_with(c, model, ctx) : rerank::topk(ctx);
    ReportRow row{model, k, {}};
    AllocationRow alloc{model, k, {}, {}, {}};
    evaluate_slates(c, slates, scores, data, relevant, k, row, alloc);
    report.rows.push_back(std::move(row));
    report.allocations.push_back(std::move(alloc));
  }
}

fs::path score_path(const RunConfig& c, const fs::path& dataset_dir) {
  if (c.data.has("score_file")) return resolve(dataset_dir, c.data.get_string("score_file", ""));
  return processed_dir(c, dataset_dir) / "scores.tsv";
}

void in_processing(const RunConfig& c, const fs::path& dataset_dir, const fs::path& log_dir,
                   BenchmarkReport& report) {
  const auto data = ingest::read_dataset(processed_dir(c, dataset_dir));
  InteractionLog known = data.train;
  known.records.insert(known.records.end(), data.valid.records.begin(), data.valid.records.end());
  const auto tc = train_config(c);
  for (const auto& model : c.models) {
    const auto hooks = hooks_for(c, model);
    const auto result = train::train(data, tc, hooks);
    const auto scores = train::predict(result.model, data.catalog, {}, &known);
    ingest::write_scores(scores, data.catalog, log_dir / ("scores_" + model + ".tsv"));
    train::save_model(result.model, data.catalog, {tc.seed, tc.epochs, hooks.describe()},
                      log_dir / ("model_" + model + ".txt"));
    recommendation_rows(c, model, scores, data, report, false);
  }
}

std::vector<std::string> docs_of(const std::vector<ingest::RunEntry>& entries) {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.doc);
  return out;
}

void search_rows(const RunConfig& c, const std::string& model, const ingest::RunList& run,
                 const ingest::IntentJudgments& qrels, BenchmarkReport& report) {
  const double alpha = c.data.get_double("alpha", 0.5);
  for (std::size_t k : c.topk) {
    double err = 0.0, andcg = 0.0, srec = 0.0;
    std::size_t n = 0;
    for (const auto& [qid, entries] : run.queries) {
      const auto found = qrels.queries.find(qid);
      if (found == qrels.queries.end()) continue;
      const auto docs = docs_of(entries);
      err += metrics::err_ia(docs, found->second, k);
      andcg += metrics::alpha_ndcg(docs, found->second, alpha, k);
      srec += metrics::s_recall(docs, found->second, k);
      ++n;
    }
    if (n == 0) throw UndefinedMetric("no query of the run has judgments");
    const double m = static_cast<double>(n);
    ReportRow row{model, k, {}};
    if (wants(c, "err_ia")) row.values["err_ia"] = err / m;
    if (wants(c, "alpha_ndcg")) row.values["alpha_ndcg"] = andcg / m;
    if (wants(c, "s_recall")) row.values["s_recall"] = srec / m;
    report.rows.push_back(std::move(row));
  }
}

void search_stage(const RunConfig& c, const fs::path& dataset_dir, const fs::path& log_dir,
                  BenchmarkReport& report) {
  const auto depth = positive_int(c.data, "run_depth", ingest::kDefaultRunDepth);
  const auto run = ingest::parse_run_file(
      resolve(dataset_dir, c.data.get_string("run_file", "run.txt")), depth);
  const auto qrels =
      ingest::parse_diversity_qrels(resolve(dataset_dir, c.data.get_string("qrels_file", "qrels.txt")));
  if (c.stage == Stage::evaluate) {
    search_rows(c, "base", run, qrels, report);
    return;
  }
  const std::size_t depth_out = *std::max_element(c.topk.begin(), c.topk.end());
  for (const auto& model : c.models) {
    diversify::DiversifyParams params;
    params.method = diversify::parse_method(model);
    params.lambda = c.params(model).get_double("lambda", params.lambda);
    params.k = depth_out;
    params.depth = depth;
    const auto out = diversify::diversify_run(run, qrels, params);
    ingest::write_run_file(out, log_dir / ("run_" + model + ".txt"), model);
    search_rows(c, model, out, qrels, report);
  }
}

}  // namespace

BenchmarkReport execute(const RunConfig& c, const RunPaths& paths, const fs::path& log_dir) {
  BenchmarkReport report;
  report.task = to_string(c.task);
  report.stage = to_string(c.stage);
  report.dataset = c.dataset;
  report.seed = c.seed;
  report.metrics = c.metrics;
  report.config_snapshot = dump_config(c.resolved);
  const fs::path dataset_dir = paths.data_root / c.dataset;
  if (!fs::is_directory(dataset_dir)) throw IoError("dataset directory " + dataset_dir.string() + " not found");

  switch (c.stage) {
    case Stage::pre_processing:
      throw UnsupportedStage("pre-processing models are not part of this toolkit");
    case Stage::process:
      if (c.task == Task::recommendation) {
        process_recommendation(c, dataset_dir, report);
      } else {
        process_search(c, dataset_dir, report);
      }
      break;
    case Stage::in_processing:
      if (c.task == Task::search) throw UnsupportedStage("in-processing is available for recommendation only");
      in_processing(c, dataset_dir, log_dir, report);
      break;
    case Stage::post_processing:
    case Stage::evaluate:
      if (c.task == Task::search) {
        search_stage(c, dataset_dir, log_dir, report);
      } else {
        const auto data = ingest::read_dataset(processed_dir(c, dataset_dir));
        const auto scores = ingest::read_scores(score_path(c, dataset_dir), data.catalog);
        const bool rerank = c.stage == Stage::post_processing;
        for (const auto& model : c.models) recommendation_rows(c, model, scores, data, report, rerank);
      }
      break;
  }
  return report;
}

fs::path data_root_from_env(const fs::path& fallback) {
  const char* env = std::getenv("FAIRDIVERSE_DATA_DIR");
  return env && *env ? fs::path(env) : fallback;
}

namespace {

// Exclusive advisory lock on log_dir/.lock, released on destruction or exit.
class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) {
    const auto path = dir / ".lock";
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) throw IoError("cannot open lock file " + path.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw IoError("log directory " + dir.string() + " is in use by another run");
    }
  }
  ~DirectoryLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  std::optional<fs::path> log_dir;
  try {
    const auto merged = merge_layers(
        {options.properties, options.task, options.stage, options.dataset, options.config_file});
    const auto config = build_run_config(merged, options.strict,
                                         [&](const std::string& msg) { err << "warning: " << msg << "\n"; });
    log_dir = options.paths.log_root / config.log_name;
    std::error_code ec;
    fs::create_directories(*log_dir, ec);
    if (ec) throw IoError("cannot create " + log_dir->string() + ": " + ec.message());
    const DirectoryLock lock(*log_dir);
    fs::remove(*log_dir / "error.txt", ec);

    const auto start = std::chrono::steady_clock::now();
    auto report = execute(config, options.paths, *log_dir);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_report(report, *log_dir);
    out << render_table(report);
    out << "report written to " << log_dir->string() << "\n";
    return 0;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    if (log_dir) {
      try {
        ingest::write_text(*log_dir / "error.txt", e.code() + "\t" + e.what() + "\n");
      } catch (const Error&) {
      }
    }
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (log_dir) {
      try {
        ingest::write_text(*log_dir / "error.txt", std::string("Internal\t") + e.what() + "\n");
      } catch (const Error&) {
      }
    }
    return 1;
  }
}

}  // namespace fairrank::pipeline
