#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "fairrank/errors.hpp"
#include "fairrank/pipeline/benchmark_report.hpp"
#include "fairrank/pipeline/config.hpp"
#include "fairrank/pipeline/run_config.hpp"
#include "fairrank/pipeline/runner.hpp"
#include "fairrank/synth/synthetic.hpp"
#include "support.hpp"

using namespace fairrank;
using namespace fairrank::pipeline;
namespace fs = std::filesystem;

namespace {

const fs::path kProperties = FAIRRANK_PROPERTIES_DIR;

ConfigMap defaults(const std::string& task, const std::string& stage, const std::string& dataset,
                   const std::string& user = "") {
  ConfigLayers layers{kProperties, task, stage, dataset, std::nullopt};
  if (!user.empty()) {
    static testing::TempDir dir("fairrank-user");
    static int n = 0;
    const auto path = dir / ("user" + std::to_string(n++) + ".yaml");
    testing::spit(path, user);
    layers.user_file = path;
  }
  return merge_layers(layers);
}

// One small synthetic dataset shared by every run below.
struct Workspace {
  testing::TempDir dir{"fairrank-pipeline"};
  fs::path data() const { return dir / "data"; }
  fs::path logs() const { return dir / "log"; }

  Workspace() {
    synth::RecSpec rec;
    rec.users = 60;
    rec.items = 40;
    rec.groups = 4;
    rec.interactions_per_user = 12;
    synth::generate_recommendation(rec, data() / "synth");
    synth::SearchSpec search;
    search.queries = 4;
    search.docs_per_query = 30;
    synth::generate_search(search, data() / "synth_search");
  }
};

Workspace& workspace() {
  static Workspace w;
  return w;
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_stage(const std::string& task, const std::string& stage, const std::string& dataset,
                  const std::string& user_yaml, const std::string& log_name) {
  auto& w = workspace();
  RunOptions opts;
  opts.task = task;
  opts.stage = stage;
  opts.dataset = dataset;
  opts.properties = kProperties;
  opts.paths = {w.data(), w.logs()};
  const auto file = w.dir / (log_name + ".yaml");
  testing::spit(file, "log_name: " + log_name + "\n" + user_yaml);
  opts.config_file = file;
  std::ostringstream out;
  std::ostringstream err;
  const int code = pipeline::run(opts, out, err);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("parse, dump and parse again") {
    const auto c = parse_config("a: 1\nb: [x, y]\nsec:\n  k: v\n  l: [1, 2]\n");
    CHECK(std::get<ConfigScalar>(c.at("a")) == "1");
    CHECK(std::get<ConfigList>(c.at("b")) == ConfigList{"x", "y"});
    CHECK(std::get<ConfigScalar>(std::get<ConfigSection>(c.at("sec")).at("k")) == "v");
    CHECK(parse_config(dump_config(c)) == c);
    CHECK(dump_config(parse_config(dump_config(c))) == dump_config(c));
  }

  TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(parse_config("a: [1, 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("a:\n  b:\n    c: 1\n"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("- 1\n", "user.yaml"), doctest::Contains("user.yaml"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/fairrank.yaml"), IoError);
  }

  TEST_CASE("merge replaces lists and merges sections") {
    const auto base = parse_config("topk: [10, 20]\ntrain:\n  dim: 32\n  epochs: 20\n");
    const auto over = parse_config("topk: [5]\ntrain:\n  epochs: 3\n");
    const auto m = merge(base, over);
    CHECK(std::get<ConfigList>(m.at("topk")) == ConfigList{"5"});
    const auto& train = std::get<ConfigSection>(m.at("train"));
    CHECK(std::get<ConfigScalar>(train.at("dim")) == "32");
    CHECK(std::get<ConfigScalar>(train.at("epochs")) == "3");
  }

  TEST_CASE("merge is associative") {
    const auto a = parse_config("x: 1\ns:\n  p: 1\n  q: [1]\nl: [a]\n");
    const auto b = parse_config("s:\n  q: [2, 3]\nl: b\ny: 2\n");
    const auto c = parse_config("s:\n  p: 9\n  r: 1\nx: [z]\n");
    CHECK(merge(merge(a, b), c) == merge(a, merge(b, c)));
    CHECK(merge(a, ConfigMap{}) == a);
    CHECK(merge(ConfigMap{}, a) == a);
  }

  TEST_CASE("layering resolves every default") {
    const auto rc = build_run_config(defaults("recommendation", "post-processing", "synth"));
    CHECK(rc.models == std::vector<std::string>{"base", "min_regularizer", "cpfair", "fairrec", "pmmf", "welf"});
    CHECK(rc.topk == std::vector<std::size_t>{10, 20});
    CHECK(rc.params("cpfair").get_double("lambda", -1) == doctest::Approx(0.1));
    const auto user = build_run_config(
        defaults("recommendation", "post-processing", "synth", "model: pmmf\ntopk: [3]\npmmf:\n  lambda: 2\n"));
    CHECK(user.models == std::vector<std::string>{"pmmf"});
    CHECK(user.topk == std::vector<std::size_t>{3});
    CHECK(user.params("pmmf").get_double("lambda", -1) == 2.0);
  }

  TEST_CASE("strict and lenient unknown keys") {
    auto merged = defaults("recommendation", "post-processing", "synth");
    merged["colour"] = ConfigScalar("blue");
    CHECK_THROWS_AS(build_run_config(merged), UnknownKeyError);
    std::vector<std::string> warnings;
    build_run_config(merged, false, [&](const std::string& w) { warnings.push_back(w); });
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("colour") != std::string::npos);
  }

  TEST_CASE("invalid selections") {
    CHECK_THROWS_AS(defaults("recommendation", "post-processing", "synth", "model: magic\n"), ConfigError);
    CHECK_THROWS_AS(defaults("recommendation", "in-processing", "synth", "model: cpfair\n"), ConfigError);
    CHECK_THROWS_AS(defaults("recommendation", "post-processing", "nowhere"), ConfigError);
    auto merged = defaults("recommendation", "post-processing", "synth");
    merged["topk"] = ConfigList{};
    CHECK_THROWS_AS(build_run_config(merged), ConfigError);
    merged["topk"] = ConfigList{"0"};
    CHECK_THROWS_AS(build_run_config(merged), ConfigError);
    merged["topk"] = ConfigList{"10"};
    merged["metrics"] = ConfigList{"err_ia"};
    CHECK_THROWS_AS(build_run_config(merged), ConfigError);
  }

  TEST_CASE("registry") {
    CHECK(registered_models(Task::recommendation, Stage::in_processing).size() == 6);
    CHECK(registered_models(Task::search, Stage::post_processing).size() == 2);
    CHECK(registered_models(Task::search, Stage::in_processing).empty());
    CHECK(parse_stage("post-processing") == Stage::post_processing);
    CHECK(to_string(Task::search) == "search");
    CHECK_THROWS_AS(parse_task("ads"), ConfigError);
  }
}

TEST_SUITE("report") {
  TEST_CASE("metric formatting") {
    CHECK(format_metric(0.29250001) == "0.2925");
    CHECK(format_metric(-0.0) == "0.0000");
    CHECK(format_metric(-0.00001) == "0.0000");
    CHECK(format_metric(1.0) == "1.0000");
  }

  TEST_CASE("emit is deterministic") {
    BenchmarkReport r;
    r.task = "recommendation";
    r.stage = "post-processing";
    r.dataset = "toy";
    r.metrics = {"ndcg", "gini"};
    r.rows = {{"base", 10, {{"ndcg", 0.5}, {"gini", 0.25}}}, {"base", 20, {{"ndcg", 0.6}, {"gini", 0.2}}}};
    r.allocations = {{"base", 10, "item", "exposure", {{"g0", 3.0}, {"g1", 7.0}}}};
    r.config_snapshot = "seed: 1\n";
    testing::TempDir a;
    testing::TempDir b;
    emit_report(r, a.path());
    r.wall_seconds = 99.0;
    emit_report(r, b.path());
    for (const char* f : {"records.jsonl", "table.txt", "allocations.tsv", "config.yaml"}) {
      CHECK(testing::slurp(a / f) == testing::slurp(b / f));
    }
    CHECK(lines(testing::slurp(a / "records.jsonl")) == 2);
    CHECK(testing::slurp(a / "table.txt").find("NDCG") != std::string::npos);
  }
}

TEST_SUITE("runs") {
  TEST_CASE("post-processing grid and replay") {
    const auto first = run_stage("recommendation", "post-processing", "synth",
                                 "model: [base, cpfair]\ntopk: [5, 10]\n", "grid");
    REQUIRE_MESSAGE(first.code == 0, first.err);
    const auto dir = workspace().logs() / "grid";
    const auto records = testing::slurp(dir / "records.jsonl");
    CHECK(lines(records) == 4);
    const auto table = testing::slurp(dir / "table.txt");

    const auto again = run_stage("recommendation", "post-processing", "synth",
                                 "model: [base, cpfair]\ntopk: [5, 10]\n", "grid");
    REQUIRE(again.code == 0);
    CHECK(testing::slurp(dir / "records.jsonl") == records);
    CHECK(testing::slurp(dir / "table.txt") == table);

    // The snapshot alone reproduces the report.
    const auto snapshot = testing::slurp(dir / "config.yaml");
    auto& w = workspace();
    testing::spit(w.dir / "snapshot.yaml", snapshot);
    RunOptions opts;
    opts.task = "recommendation";
    opts.stage = "post-processing";
    opts.dataset = "synth";
    opts.properties = kProperties;
    opts.paths = {w.data(), w.dir / "replay"};
    opts.config_file = w.dir / "snapshot.yaml";
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE_MESSAGE(pipeline::run(opts, out, err) == 0, err.str());
    CHECK(testing::slurp(w.dir / "replay" / "grid" / "records.jsonl") == records);
  }

  TEST_CASE("other stages") {
    const auto in = run_stage("recommendation", "in-processing", "synth",
                              "model: [bpr, reg]\ntopk: [10]\ntrain:\n  epochs: 2\n  dim: 8\n", "inproc");
    CHECK_MESSAGE(in.code == 0, in.err);
    CHECK(lines(testing::slurp(workspace().logs() / "inproc" / "records.jsonl")) == 2);
    const auto eval = run_stage("recommendation", "evaluate", "synth", "", "eval");
    CHECK_MESSAGE(eval.code == 0, eval.err);
    const auto search = run_stage("search", "post-processing", "synth_search", "topk: [5]\n", "search");
    CHECK_MESSAGE(search.code == 0, search.err);
    CHECK(lines(testing::slurp(workspace().logs() / "search" / "records.jsonl")) == 2);
  }

  TEST_CASE("failures leave an error record") {
    const auto pre = run_stage("recommendation", "pre-processing", "synth", "", "pre");
    CHECK(pre.code != 0);
    CHECK(testing::slurp(workspace().logs() / "pre" / "error.txt").rfind("UnsupportedStage\t", 0) == 0);
    const auto bad = run_stage("recommendation", "post-processing", "synth", "pmmf:\n  lambda: lots\n", "bad");
    CHECK(bad.code != 0);
    CHECK(bad.err.find("lambda") != std::string::npos);
    const auto missing = run_stage("recommendation", "post-processing", "steam", "", "missing");
    CHECK(missing.code != 0);
    CHECK(fs::exists(workspace().logs() / "missing" / "error.txt"));
  }

  TEST_CASE("command line") {
    auto& w = workspace();
    const std::string cli = FAIRRANK_CLI;
    const std::string common = " --properties " + kProperties.string() + " --log-dir " + (w.dir / "clilog").string();
    const std::string user = (w.dir / "cli.yaml").string();
    testing::spit(user, "log_name: cli\nmodel: base\ntopk: [10]\n");
    const std::string quiet = " > " + (w.dir / "cli.out").string() + " 2>&1";

    const std::string env = "FAIRDIVERSE_DATA_DIR=" + w.data().string() + " ";
    CHECK(std::system((env + cli + " --task recommendation --stage post-processing --dataset synth --config " +
                       user + common + quiet)
                          .c_str()) == 0);
    CHECK(lines(testing::slurp(w.dir / "clilog" / "cli" / "records.jsonl")) == 1);

    // Without the override the data directory is missing.
    CHECK(std::system((cli + " --task recommendation --stage post-processing --dataset synth --data-dir " +
                       (w.dir / "nodata").string() + " --config " + user + common + quiet)
                          .c_str()) != 0);
    CHECK(std::system((cli + " --task recommendation" + quiet).c_str()) != 0);
  }

  TEST_CASE("data root from the environment") {
    ::setenv("FAIRDIVERSE_DATA_DIR", "/srv/data", 1);
    CHECK(data_root_from_env("dataset") == fs::path("/srv/data"));
    ::unsetenv("FAIRDIVERSE_DATA_DIR");
    CHECK(data_root_from_env("dataset") == fs::path("dataset"));
  }
}
