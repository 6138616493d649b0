#include "doctest.h"
#include "ssgbnp/model.hpp"

using namespace ssgbnp;

namespace {

GameSSG two_by_two() {
  GameSSG g;
  g.n_targets = 2;
  g.n_attackers = 2;
  g.p = {0.5, 0.5};
  g.d_prot = {{8, 6}, {7, 9}};
  g.d_unprot = {{2, 1}, {0, 3}};
  g.a_prot = {{1, 2}, {0, 4}};
  g.a_unprot = {{6, 7}, {9, 5}};
  g.w = {3, 4};
  g.budget = 4.5;
  return g;
}

}  // namespace

TEST_CASE("validate accepts a symmetric valid game") {
  auto g = two_by_two();
  CHECK_NOTHROW(validate(g));
}

TEST_CASE("validate rejects probabilities that do not sum to one") {
  auto g = two_by_two();
  g.p = {0.7, 0.7};
  CHECK_THROWS_WITH_AS(validate(g), doctest::Contains("probabilities sum 1.4"), ValidationError);
}

TEST_CASE("validate rejects a payoff ordering violation and names the index") {
  auto g = two_by_two();
  g.d_prot[0][1] = 1;
  g.d_unprot[0][1] = 3;
  try {
    validate(g);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("payoff ordering") != std::string::npos);
    CHECK(msg.find("[0][1]") != std::string::npos);
  }
  g = two_by_two();
  g.a_prot[1][0] = 10;
  CHECK_THROWS_AS(validate(g), ValidationError);
}

TEST_CASE("probabilities within 1e-6 are normalized, farther ones rejected") {
  auto g = two_by_two();
  g.p = {0.5000004, 0.5};
  validate(g);
  CHECK(g.p[0] + g.p[1] == doctest::Approx(1.0).epsilon(1e-15));
  g.p = {0.50001, 0.5};
  CHECK_THROWS_AS(validate(g), ValidationError);
}

TEST_CASE("shape and sign checks") {
  auto g = two_by_two();
  g.w = {3};
  CHECK_THROWS_AS(validate(g), ValidationError);
  g = two_by_two();
  g.w[1] = 0;
  CHECK_THROWS_AS(validate(g), ValidationError);
  g = two_by_two();
  g.budget = -1;
  CHECK_THROWS_AS(validate(g), ValidationError);
  g = two_by_two();
  g.d_prot[1].pop_back();
  CHECK_THROWS_AS(validate(g), ValidationError);
}

TEST_CASE("generic games need matching tensors") {
  GameSG sg;
  sg.p = {1.0};
  sg.R = {{{1, 0}, {0, 1}}};
  sg.C = {{{0, 1}, {1, 0}}};
  CHECK_NOTHROW(validate(sg));
  CHECK(sg.n_leader() == 2);
  CHECK(sg.n_follower() == 2);
  sg.C = {{{0, 1}}};
  CHECK_THROWS_AS(validate(sg), ValidationError);
  Instance inst = GameSG{{{{1.0}}}, {{{2.0}}}, {0.6, 0.6}};
  CHECK_THROWS_AS(validate(inst), ValidationError);
}

TEST_CASE("columns compare by incidence vector") {
  auto g = two_by_two();
  const Column a = Column::singleton(2, 0);
  Column b = Column::empty(2);
  b.set(0, true);
  CHECK(a == b);
  CHECK(ColumnHash{}(a) == ColumnHash{}(b));
  CHECK(a.to_string() == "{1}");
  CHECK(Column::empty(2).to_string() == "{}");
  CHECK(Column::empty(2).affordable(g));
  Column both = Column::empty(2);
  both.set(0, true);
  both.set(1, true);
  CHECK(both.count() == 2);
  CHECK(both.cost(g.w) == 7.0);
  CHECK_FALSE(both.affordable(g));
}

TEST_CASE("strong Stackelberg responses break attacker ties for the defender") {
  GameSSG g;
  g.n_targets = 2;
  g.n_attackers = 1;
  g.p = {1.0};
  g.d_prot = {{5, 9}};
  g.d_unprot = {{1, 2}};
  g.a_prot = {{0, 0}};
  g.a_unprot = {{4, 4}};
  g.w = {1, 1};
  g.budget = 1.5;
  validate(g);
  // Equal coverage leaves the attacker indifferent; target 2 is better for the defender.
  auto r = sse_responses(g, {0.5, 0.5});
  CHECK(r[0].target == 1);
  CHECK(r[0].defender_utility == doctest::Approx(5.5));
  CHECK(r[0].attacker_utility == doctest::Approx(2.0));
  r = sse_responses(g, {0.2, 0.8});
  CHECK(r[0].target == 0);
  CHECK(expected_value(g, r) == doctest::Approx(0.2 * 5 + 0.8 * 1));
}

TEST_CASE("check_mixed_strategy flags broken invariants") {
  auto g = two_by_two();
  validate(g);
  MixedStrategy s;
  s.support = {{Column::singleton(2, 0), 0.5}, {Column::singleton(2, 1), 0.5}};
  s.responses = sse_responses(g, s.coverage(2));
  CHECK(check_mixed_strategy(g, s).empty());

  auto bad = s;
  bad.support[0].probability = 0.7;
  CHECK_FALSE(check_mixed_strategy(g, bad).empty());

  bad = s;
  Column both = Column::empty(2);
  both.set(0, true);
  both.set(1, true);
  bad.support[0].column = both;
  CHECK_FALSE(check_mixed_strategy(g, bad).empty());

  bad = s;
  bad.responses[0].target = 1 - bad.responses[0].target;
  CHECK_FALSE(check_mixed_strategy(g, bad).empty());
}

TEST_CASE("root gap uses max(1, |z_IP|) as denominator") {
  CHECK(root_gap_percent(12.0, 10.0) == doctest::Approx(20.0));
  CHECK(root_gap_percent(0.5, 0.25) == doctest::Approx(25.0));
  CHECK(root_gap_percent(3.0, 3.0) == 0.0);
}
