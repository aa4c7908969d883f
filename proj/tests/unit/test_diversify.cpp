#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fairrank/diversify/diversify.hpp"
#include "fairrank/errors.hpp"
#include "fairrank/ingest/judgments.hpp"
#include "support.hpp"

using namespace fairrank;
using namespace fairrank::diversify;

namespace {

std::vector<ingest::RunEntry> run_of(std::vector<double> scores) {
  std::vector<ingest::RunEntry> run;
  for (std::size_t d = 0; d < scores.size(); ++d) {
    run.push_back({"d" + std::to_string(d + 1), scores[d], static_cast<long long>(d + 1)});
  }
  return run;
}

QueryPool pool_of(const testing::SearchInstance& inst) {
  return QueryPool(inst.run, inst.priors, inst.relevance, inst.run.size());
}

std::vector<std::size_t> prefix(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_SUITE("query_pool") {
  TEST_CASE("normalisation") {
    const QueryPool p(run_of({9, 5, 1}), {1.0}, {{1}, {0}, {1}});
    CHECK(p.score(0) == 1.0);
    CHECK(p.score(1) == 0.5);
    CHECK(p.score(2) == 0.0);
    const QueryPool flat(run_of({3, 3}), {1.0}, {{1}, {0}});
    CHECK(flat.score(0) == 0.5);
    CHECK(flat.score(1) == 0.5);
  }

  TEST_CASE("depth truncation") {
    const QueryPool p(run_of({5, 4, 3, 2, 1}), {1.0}, {{1}, {0}, {1}, {0}, {0}}, 3);
    CHECK(p.size() == 3);
    CHECK(p.score(2) == 0.0);
  }

  TEST_CASE("judgment-backed relevance") {
    const auto j = testing::judgments(2, {{"d2", 2}, {"d3", 1}, {"d3", 2}});
    const QueryPool p(run_of({3, 2, 1}), j);
    CHECK(p.num_intents() == 2);
    CHECK(p.relevance(0, 0) == 0.0);
    CHECK(p.relevance(1, 1) == 1.0);
    CHECK(p.relevance(2, 0) == 1.0);
    CHECK(p.prior(0) == 0.5);
  }

  TEST_CASE("invalid inputs") {
    auto dup = run_of({2, 1});
    dup[1].doc = dup[0].doc;
    CHECK_THROWS_AS(QueryPool(dup, {1.0}, {{1}, {1}}), InvariantViolation);
    CHECK_THROWS_AS(QueryPool(run_of({2, 1}), {0.5, 0.6}, {{1, 0}, {1, 0}}), InvariantViolation);
    CHECK_THROWS_AS(QueryPool(run_of({2, 1}), {1.0}, {{1.5}, {1}}), InvariantViolation);
    CHECK_THROWS_AS(QueryPool(run_of({2, 1}), {1.0}, {{1}}), InvariantViolation);
    const QueryPool empty(run_of({}), {1.0}, {});
    CHECK_THROWS_AS(xquad(empty, 0.5, 3), EmptyCandidates);
    CHECK_THROWS_AS(pm2(empty, 0.5, 3), EmptyCandidates);
    const QueryPool one(run_of({1}), {1.0}, {{1}});
    CHECK_THROWS_AS(xquad(one, 1.5, 1), InvalidArgument);
    CHECK_THROWS_AS(pm2(one, -0.1, 1), InvalidArgument);
  }
}

TEST_SUITE("xquad") {
  TEST_CASE("lambda zero keeps the run order") {
    const QueryPool p(run_of({0.9, 0.9, 0.5, 0.1}), {0.5, 0.5}, {{0, 1}, {1, 1}, {1, 0}, {0, 0}});
    CHECK(xquad(p, 0.0, 3) == prefix(3));
    CHECK(xquad(p, 0.0, 10) == prefix(4));
  }

  TEST_CASE("pure diversity picks the uncovered intent") {
    const QueryPool p(run_of({3, 2, 1}), {0.5, 0.5}, {{1, 0}, {1, 0}, {0, 1}});
    CHECK(xquad(p, 1.0, 2) == std::vector<std::size_t>{0, 2});
  }

  TEST_CASE("uniform coverage keeps the run order for every lambda") {
    const QueryPool p(run_of({4, 3, 2, 1}), {0.3, 0.7}, {{1, 1}, {1, 1}, {1, 1}, {1, 1}});
    for (double lambda : {0.0, 0.25, 0.5, 1.0}) CHECK(xquad(p, lambda, 4) == prefix(4));
    const QueryPool none(run_of({4, 3, 2, 1}), {0.3, 0.7}, {{0, 0}, {0, 0}, {0, 0}, {0, 0}});
    for (double lambda : {0.0, 0.5, 1.0}) CHECK(xquad(none, lambda, 4) == prefix(4));
  }

  TEST_CASE("matches the step-wise oracle") {
    std::mt19937_64 rng(31);
    for (int n = 0; n < 300; ++n) {
      const auto inst = testing::make_search_instance(rng, 1 + rng() % 8, 1 + rng() % 4, n % 2 == 0);
      const double lambda = static_cast<double>(rng() % 5) / 4.0;
      const std::size_t k = 1 + rng() % 8;
      CHECK(xquad(pool_of(inst), lambda, k) == testing::oracle::xquad(inst, lambda, k));
    }
  }
}

TEST_SUITE("pm2") {
  TEST_CASE("single intent orders by relevance") {
    const QueryPool p(run_of({5, 4, 3, 2}), {1.0}, {{0.25}, {1.0}, {0.5}, {1.0}});
    const auto out = pm2(p, 0.7, 4);
    CHECK(out.order == std::vector<std::size_t>{1, 3, 2, 0});
  }

  TEST_CASE("irrelevant docs wait until coverage runs out") {
    const QueryPool p(run_of({5, 4, 3, 2}), {0.5, 0.5}, {{0, 0}, {0, 1}, {0, 0}, {1, 0}});
    const auto out = pm2(p, 0.5, 4);
    CHECK(std::set<std::size_t>(out.order.begin(), out.order.begin() + 2) == std::set<std::size_t>{1, 3});
  }

  TEST_CASE("two equal intents share seats evenly") {
    const QueryPool p(run_of({6, 5, 4, 3, 2, 1}), {0.5, 0.5},
                      {{1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}});
    const auto out = pm2(p, 0.8, 4);
    CHECK(out.seats == std::vector<double>{2.0, 2.0});
    CHECK(out.order == std::vector<std::size_t>{0, 3, 1, 4});
  }

  TEST_CASE("matches the step-wise oracle") {
    std::mt19937_64 rng(32);
    for (int n = 0; n < 300; ++n) {
      const auto inst = testing::make_search_instance(rng, 1 + rng() % 8, 1 + rng() % 4, n % 2 == 1);
      const double lambda = static_cast<double>(rng() % 5) / 4.0;
      const std::size_t k = 1 + rng() % 8;
      std::vector<double> seats;
      const auto expected = testing::oracle::pm2(inst, lambda, k, &seats);
      const auto out = pm2(pool_of(inst), lambda, k);
      CHECK(out.order == expected);
      CHECK(out.seats == seats);
    }
  }

  TEST_CASE("seat total counts docs with intent mass") {
    std::mt19937_64 rng(33);
    for (int n = 0; n < 50; ++n) {
      const auto inst = testing::make_search_instance(rng, 2 + rng() % 7, 1 + rng() % 4, true);
      const auto out = pm2(pool_of(inst), 0.5, 5);
      double seats = 0.0;
      for (double s : out.seats) seats += s;
      double expected = 0.0;
      for (std::size_t d : out.order) {
        double mass = 0.0;
        for (double r : inst.relevance[d]) mass += r;
        expected += mass > 0.0 ? 1.0 : 0.0;
      }
      CHECK(seats == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_SUITE("outputs") {
  TEST_CASE("duplicate-free prefixes of the pool") {
    std::mt19937_64 rng(34);
    for (int n = 0; n < 100; ++n) {
      const auto inst = testing::make_search_instance(rng, 1 + rng() % 12, 1 + rng() % 5, false);
      const std::size_t k = 1 + rng() % 15;
      const auto pool = pool_of(inst);
      for (const auto& order : {xquad(pool, 0.5, k), pm2(pool, 0.5, k).order}) {
        CHECK(order.size() == std::min(k, pool.size()));
        CHECK(std::set<std::size_t>(order.begin(), order.end()).size() == order.size());
        for (std::size_t d : order) CHECK(d < pool.size());
      }
    }
  }

  TEST_CASE("method names") {
    CHECK(parse_method("xquad") == Method::xquad);
    CHECK(to_string(parse_method("pm2")) == "pm2");
    CHECK_THROWS_AS(parse_method("mmr"), InvalidArgument);
  }

  TEST_CASE("whole runs") {
    const auto run = ingest::parse_run_file(testing::fixture_dir() / "clueweb_mini" / "run.txt");
    auto qrels = ingest::parse_diversity_qrels(testing::fixture_dir() / "clueweb_mini" / "qrels.txt");
    qrels.queries.erase("6");
    DiversifyParams params;
    params.k = 10;
    const auto out = diversify_run(run, qrels, params);
    REQUIRE(out.queries.size() == run.queries.size());
    for (const auto& [qid, entries] : out.queries) {
      CHECK(entries.size() == 10);
      CHECK(entries.front().rank == 1);
      CHECK(entries.front().score == 10.0);
    }
    for (std::size_t r = 0; r < 10; ++r) CHECK(out.queries.at("6")[r].doc == run.queries.at("6")[r].doc);

    const QueryPool pool(run.queries.at("1"), qrels.query("1"), params.depth);
    const auto order = xquad(pool, params.lambda, params.k);
    for (std::size_t r = 0; r < 10; ++r) CHECK(out.queries.at("1")[r].doc == pool.doc(order[r]));

    params.method = Method::pm2;
    CHECK(diversify_run(run, qrels, params) == diversify_run(run, qrels, params));
  }
}
