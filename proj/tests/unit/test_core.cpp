#include <doctest.h>

#include <cmath>
#include <random>

#include "fairrank/core/dual_state.hpp"
#include "fairrank/core/group_utility.hpp"
#include "fairrank/core/interaction_log.hpp"
#include "fairrank/errors.hpp"
#include "support.hpp"

using namespace fairrank;
using fairrank::testing::make_catalog;

namespace {

Catalog two_group_catalog() {
  // i0 in g0, i1 in g1, i2 in both.
  return make_catalog(2, {{0}, {1}, {0, 1}}, 2);
}

ScoreMatrix full_scores(const Catalog& c, std::vector<std::vector<double>> s,
                        ScoreSemantics sem = ScoreSemantics::probability) {
  std::vector<std::vector<ScoredItem>> rows(c.num_users());
  for (UserIndex u = 0; u < s.size(); ++u) {
    for (ItemIndex i = 0; i < s[u].size(); ++i) rows[u].push_back({i, s[u][i]});
  }
  return ScoreMatrix(c, std::move(rows), sem);
}

}  // namespace

TEST_SUITE("catalog") {
  TEST_CASE("index order follows id order") {
    Catalog::Spec spec;
    spec.users = {{"bob", {}}, {"alice", {{"age", "31"}}}};
    spec.items = {{"z", {}}, {"a", {}}};
    spec.groups = {"g2", "g1"};
    spec.item_groups = {{"z", {"g2"}}, {"a", {"g1", "g2"}}};
    const Catalog c(spec);
    CHECK(c.user_id(0) == "alice");
    CHECK(c.user_attributes(0).at("age") == "31");
    CHECK(c.item_id(0) == "a");
    CHECK(c.group_id(0) == "g1");
    CHECK(c.groups_of(c.item_index("a")).size() == 2);
    CHECK(c.items_in(c.group_index("g2")).size() == 2);
    CHECK_FALSE(c.find_user("carol"));
    CHECK_THROWS_AS(c.user_index("carol"), UnknownEntity);
    CHECK(Catalog(c.to_spec()) == c);
  }

  TEST_CASE("invalid specs are rejected") {
    Catalog::Spec dup;
    dup.users = {{"u", {}}, {"u", {}}};
    dup.groups = {"g"};
    CHECK_THROWS_AS(Catalog{dup}, InvariantViolation);

    Catalog::Spec no_groups;
    no_groups.users = {{"u", {}}};
    CHECK_THROWS_AS(Catalog{no_groups}, InvariantViolation);

    Catalog::Spec orphan;
    orphan.items = {{"i", {}}};
    orphan.groups = {"g"};
    CHECK_THROWS_AS(Catalog{orphan}, InvariantViolation);

    Catalog::Spec undeclared;
    undeclared.items = {{"i", {}}};
    undeclared.groups = {"g"};
    undeclared.item_groups = {{"i", {"h"}}};
    CHECK_THROWS_AS(Catalog{undeclared}, InvariantViolation);
  }

  TEST_CASE("signatures group items with equal group sets") {
    const Catalog c = make_catalog(1, {{0}, {1}, {0, 1}, {0}, {1, 0}}, 2);
    CHECK(c.num_signatures() == 3);
    CHECK(c.signature(0) == c.signature(3));
    CHECK(c.signature(2) == c.signature(4));
    CHECK(c.signature(0) != c.signature(1));
  }

  TEST_CASE("user groups") {
    Catalog::Spec spec = two_group_catalog().to_spec();
    spec.user_groups = std::map<std::string, std::string>{{"u0000", "g0001"}};
    const Catalog c(spec);
    CHECK(c.has_user_groups());
    CHECK(c.group_of_user(0) == GroupIndex{1});
    CHECK_FALSE(c.group_of_user(1));
  }
}

TEST_SUITE("interaction_log") {
  TEST_CASE("chronological view is stable on ties") {
    InteractionLog log;
    log.records = {{"u", "b", 1, 5}, {"u", "a", 1, 3}, {"u", "c", 1, 5}, {"v", "a", 0, 1}};
    const auto by_user = log.chronological_by_user();
    REQUIRE(by_user.at("u").size() == 3);
    CHECK(by_user.at("u")[0].item == "a");
    CHECK(by_user.at("u")[1].item == "b");
    CHECK(by_user.at("u")[2].item == "c");
  }

  TEST_CASE("validation against a catalog") {
    const Catalog c = make_catalog(1, {{0}}, 1);
    InteractionLog ok{{{"u0000", "i0000", 4.5, 0}}};
    CHECK_NOTHROW(ok.validate_against(c));
    InteractionLog stranger{{{"u0009", "i0000", 1, 0}}};
    CHECK_THROWS_AS(stranger.validate_against(c), UnknownEntity);
    InteractionLog loud{{{"u0000", "i0000", 6, 0}}};
    CHECK_THROWS_AS(loud.validate_against(c), InvariantViolation);
  }
}

TEST_SUITE("score_matrix") {
  TEST_CASE("rows are validated") {
    const Catalog c = two_group_catalog();
    CHECK_THROWS_AS(full_scores(c, {{NAN}, {}}), InvariantViolation);
    CHECK_THROWS_AS(full_scores(c, {{1.5}, {}}), InvariantViolation);
    CHECK_NOTHROW(full_scores(c, {{1.5}, {}}, ScoreSemantics::raw));
    std::vector<std::vector<ScoredItem>> dup{{{0, 0.1}, {0, 0.2}}, {}};
    CHECK_THROWS_AS(ScoreMatrix(c, dup, ScoreSemantics::raw), InvariantViolation);
    std::vector<std::vector<ScoredItem>> outside{{{7, 0.1}}, {}};
    CHECK_THROWS_AS(ScoreMatrix(c, outside, ScoreSemantics::raw), UnknownEntity);
  }

  TEST_CASE("ranked row breaks ties by item") {
    const Catalog c = two_group_catalog();
    const auto s = full_scores(c, {{0.5, 0.9, 0.5}, {0.1, 0.1, 0.1}});
    const auto r = s.ranked_row(0);
    CHECK(r[0].item == 1);
    CHECK(r[1].item == 0);
    CHECK(r[2].item == 2);
    CHECK(s.score(0, 1) == 0.9);
  }
}

TEST_SUITE("ranking_slate") {
  TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(RankingSlate(0, {{}}), InvalidArgument);
    CHECK_THROWS_AS(RankingSlate(1, {{0, 1}}), InvariantViolation);
    CHECK_THROWS_AS(RankingSlate(2, {{0, 0}}), InvariantViolation);
  }

  TEST_CASE("slates must be full when enough candidates exist") {
    const Catalog c = two_group_catalog();
    const auto s = full_scores(c, {{0.5, 0.9, 0.5}, {0.1, 0.1, 0.1}});
    CHECK_NOTHROW(RankingSlate(2, {{0, 1}, {2, 1}}).validate_against(s));
    CHECK_THROWS_AS(RankingSlate(2, {{0}, {2, 1}}).validate_against(s), InvariantViolation);
  }
}

TEST_SUITE("group_utility") {
  TEST_CASE("unit exposure per slot") {
    const Catalog c = two_group_catalog();
    const auto s = full_scores(c, {{0.5, 0.9, 0.5}, {0.1, 0.1, 0.1}});
    const RankingSlate slates(2, {{0, 1}, {}});
    const auto v = group_utility(slates, s, c, UtilityAxis::item, UtilityMode::exposure);
    CHECK(v.values == std::vector<double>{1.0, 1.0});
    const RankingSlate empty(2, {{}, {}});
    CHECK(group_utility(empty, s, c, UtilityAxis::item, UtilityMode::exposure).values ==
          std::vector<double>{0.0, 0.0});
  }

  TEST_CASE("click mode sums clamped scores") {
    const Catalog c = make_catalog(1, {{0}, {0}}, 1);
    const auto s = full_scores(c, {{0.8, 0.3}});
    const auto v =
        group_utility(RankingSlate(2, {{0, 1}}), s, c, UtilityAxis::item, UtilityMode::click);
    CHECK(v.values[0] == doctest::Approx(1.1).epsilon(1e-12));
    const auto raw = full_scores(c, {{-2.0, 7.0}}, ScoreSemantics::raw);
    CHECK(group_utility(RankingSlate(2, {{0, 1}}), raw, c, UtilityAxis::item, UtilityMode::click)
              .values[0] == 1.0);
  }

  TEST_CASE("multi-group items credit every group") {
    const Catalog c = two_group_catalog();
    const auto s = full_scores(c, {{0.5, 0.9, 0.5}, {0.1, 0.1, 0.1}});
    const auto v = group_utility(RankingSlate(1, {{2}, {2}}), s, c, UtilityAxis::item,
                                 UtilityMode::exposure);
    CHECK(v.values == std::vector<double>{2.0, 2.0});
    CHECK(v.total() == 4.0);
  }

  TEST_CASE("user axis needs user groups") {
    const Catalog c = two_group_catalog();
    const auto s = full_scores(c, {{0.5, 0.9, 0.5}, {0.1, 0.1, 0.1}});
    const RankingSlate slates(1, {{0}, {1}});
    CHECK_THROWS_AS(group_utility(slates, s, c, UtilityAxis::user, UtilityMode::exposure),
                    MissingUserGroups);
    Catalog::Spec spec = c.to_spec();
    spec.user_groups = std::map<std::string, std::string>{{"u0000", "g0001"}, {"u0001", "g0001"}};
    const Catalog cu(spec);
    const auto v = group_utility(slates, s, cu, UtilityAxis::user, UtilityMode::click);
    CHECK(v.values[0] == 0.0);
    CHECK(v.values[1] == doctest::Approx(0.6));
  }

  TEST_CASE("missing score in click mode") {
    const Catalog c = two_group_catalog();
    const ScoreMatrix sparse(c, {{{0, 0.4}}, {}}, ScoreSemantics::probability);
    CHECK_THROWS_AS(group_utility(RankingSlate(1, {{1}, {}}), sparse, c, UtilityAxis::item,
                                  UtilityMode::click),
                    UnknownEntity);
  }

  TEST_CASE("evenness gap") {
    GroupUtilityVector v;
    v.values = {2, 2, 2};
    CHECK(utility_evenness_gap(v) == 0.0);
    v.values = {0, 1, 3};
    CHECK(utility_evenness_gap(v) == 3.0);
    v.values = {5};
    CHECK(utility_evenness_gap(v) == 0.0);
  }

  TEST_CASE("properties on random slates") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
      testing::RecShape shape = testing::random_shape(rng, 12, 15, 4, 5);
      shape.multi_group = true;
      const auto inst = testing::make_instance(shape, rng);
      const Catalog& c = inst.catalog;
      std::vector<std::vector<ItemIndex>> rows;
      for (UserIndex u = 0; u < c.num_users(); ++u) {
        rows.push_back(testing::oracle::sorted_prefix(*inst.scores, u, shape.k));
      }
      const RankingSlate slates(shape.k, rows);
      const auto exposure = group_utility(slates, *inst.scores, c, UtilityAxis::item,
                                          UtilityMode::exposure);
      const auto click = group_utility(slates, *inst.scores, c, UtilityAxis::item,
                                       UtilityMode::click);
      double memberships = 0.0;
      for (const auto& row : rows) {
        for (ItemIndex i : row) memberships += static_cast<double>(c.groups_of(i).size());
      }
      CHECK(exposure.total() == memberships);
      for (GroupIndex g = 0; g < c.num_groups(); ++g) {
        CHECK(click.values[g] <= exposure.values[g]);
      }

      // Additivity over a user partition.
      const std::size_t cut = c.num_users() / 2;
      std::vector<std::vector<ItemIndex>> head(rows.size()), tail(rows.size());
      for (std::size_t u = 0; u < rows.size(); ++u) (u < cut ? head : tail)[u] = rows[u];
      const auto a = group_utility(RankingSlate(shape.k, head), *inst.scores, c,
                                   UtilityAxis::item, UtilityMode::click);
      const auto b = group_utility(RankingSlate(shape.k, tail), *inst.scores, c,
                                   UtilityAxis::item, UtilityMode::click);
      for (GroupIndex g = 0; g < c.num_groups(); ++g) {
        CHECK(a.values[g] + b.values[g] == doctest::Approx(click.values[g]).epsilon(1e-12));
      }

      // Exposure ignores the score values.
      std::vector<std::vector<ScoredItem>> cubed(c.num_users());
      for (UserIndex u = 0; u < c.num_users(); ++u) {
        for (const auto& e : inst.scores->row(u)) cubed[u].push_back({e.item, std::pow(e.score, 3)});
      }
      const ScoreMatrix rescaled(c, cubed, ScoreSemantics::probability);
      CHECK(group_utility(slates, rescaled, c, UtilityAxis::item, UtilityMode::exposure).values ==
            exposure.values);
    }
  }
}

TEST_SUITE("dual_state") {
  TEST_CASE("starts uniform on the scaled simplex") {
    const DualState d(4, 2.0, 0.1);
    for (double p : d.prices()) CHECK(p == 0.5);
    CHECK(d.on_simplex());
  }

  TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(DualState(0, 1.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(DualState(2, -1.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(DualState(2, 1.0, 0.0), InvalidArgument);
  }

  TEST_CASE("zero budget pins prices at zero") {
    DualState d(3, 0.0, 0.1);
    const std::vector<double> f{5.0, -3.0, 1.0};
    d.multiplicative_update(f);
    for (double p : d.prices()) CHECK(p == 0.0);
    CHECK(d.on_simplex());
  }

  TEST_CASE("multiplicative update matches the closed form") {
    DualState d(2, 1.0, 0.1);
    const std::vector<double> f{std::log(3.0), 0.0};
    d.multiplicative_update(f);
    CHECK(d.price(0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(d.price(1) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(d.multiplicative_update(std::vector<double>{1.0}), InvalidArgument);
  }

  TEST_CASE("stays on the simplex under extreme updates") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 200.0);
    DualState d(6, 10.0, 0.1);
    for (int step = 0; step < 500; ++step) {
      std::vector<double> f(6);
      for (double& x : f) x = n(rng);
      d.multiplicative_update(f);
      REQUIRE(d.on_simplex(1e-9));
    }
    CHECK_NOTHROW(d.check());
  }
}
