#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ssgbnp/simplex.hpp"
#include "support/lp_reference.hpp"

using namespace ssgbnp;
using namespace lp_reference;

namespace {

void check_certificates(const LinearProgram& lp, const LpOutcome& out) {
  const int n = lp.num_vars();
  if (out.status == LpStatus::Optimal) {
    double dual_obj = 0.0;
    for (int i = 0; i < lp.num_rows(); ++i) {
      const auto& r = lp.rows[i];
      const double y = out.duals[i];
      if (r.relation == Relation::LessEq) CHECK(y >= -1e-8);
      if (r.relation == Relation::GreaterEq) CHECK(y <= 1e-8);
      dual_obj += y * r.rhs;
      double s = 0.0;
      for (int v = 0; v < n; ++v) s += r.coefficients[v] * out.primal[v];
      CHECK(std::abs(y * (r.rhs - s)) <= 1e-7 * (1.0 + std::abs(r.rhs)));
    }
    CHECK(std::abs(out.objective - dual_obj) <= 1e-7 * (1.0 + std::abs(out.objective)));
    for (int v = 0; v < n; ++v) {
      double col = 0.0;
      for (int i = 0; i < lp.num_rows(); ++i) col += out.duals[i] * lp.rows[i].coefficients[v];
      CHECK(col >= lp.objective[v] - 1e-8);
      CHECK(out.primal[v] >= -1e-8);
    }
    CHECK(feasible_point(lp, out.primal, 1e-8));
  } else if (out.status == LpStatus::Infeasible) {
    const auto rho = out.normalized_farkas(lp);
    double rb = 0.0;
    for (int i = 0; i < lp.num_rows(); ++i) {
      const double sign = lp.rows[i].relation == Relation::GreaterEq ? -1.0 : 1.0;
      if (lp.rows[i].relation != Relation::Equal) CHECK(rho[i] >= -1e-9);
      rb += rho[i] * sign * lp.rows[i].rhs;
    }
    CHECK(rb < -1e-9);
    for (int v = 0; v < n; ++v) {
      double col = 0.0;
      for (int i = 0; i < lp.num_rows(); ++i) {
        const double sign = lp.rows[i].relation == Relation::GreaterEq ? -1.0 : 1.0;
        col += rho[i] * sign * lp.rows[i].coefficients[v];
      }
      CHECK(col >= -1e-9);
    }
  }
}

}  // namespace

TEST_CASE("single row LP") {
  LinearProgram lp;
  lp.add_variable(1.0);
  lp.add_row({1.0}, Relation::LessEq, 3.0);
  const auto out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.primal[0] == doctest::Approx(3.0));
  CHECK(out.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("contradictory rows produce a Farkas ray") {
  LinearProgram lp;
  lp.add_variable(1.0);
  lp.add_variable(1.0);
  lp.add_row({1, 1}, Relation::LessEq, 1.0);
  lp.add_row({1, 0}, Relation::GreaterEq, 0.7);
  lp.add_row({0, 1}, Relation::GreaterEq, 0.7);
  const auto out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Infeasible);
  REQUIRE(out.farkas.size() == 3);
  check_certificates(lp, out);
  // Raw convention: rho^T A_j >= 0 on every column and rho^T b < 0.
  double rb = 0.0;
  for (int i = 0; i < 3; ++i) rb += out.farkas[i] * lp.rows[i].rhs;
  CHECK(rb < -1e-9);
  for (int v = 0; v < 2; ++v) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += out.farkas[i] * lp.rows[i].coefficients[v];
    CHECK(s >= -1e-9);
  }
}

TEST_CASE("unbounded LP is reported") {
  LinearProgram lp;
  lp.add_variable(1.0);
  lp.add_variable(0.0);
  lp.add_row({1, -1}, Relation::LessEq, 1.0);
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("free variables and upper bounds of one") {
  LinearProgram lp;
  lp.add_variable(-1.0, -kInf);  // maximize -f with f >= -2
  lp.add_variable(2.0, 0.0, 1.0);
  lp.add_row({1, 0}, Relation::GreaterEq, -2.0);
  lp.add_row({0, 1}, Relation::LessEq, 5.0);
  const auto out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.primal[0] == doctest::Approx(-2.0));
  CHECK(out.primal[1] == doctest::Approx(1.0));
  CHECK(out.objective == doctest::Approx(4.0));
  CHECK(out.upper_duals[1] == doctest::Approx(2.0));
}

TEST_CASE("random LPs match vertex enumeration and satisfy duality") {
  std::mt19937_64 rng(20240601);
  int optimal = 0, infeasible = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int m = 2 + static_cast<int>(rng() % 4);
    const auto lp = random_lp(rng, n, m, true);
    const auto out = solve_lp(lp);
    const auto ref = enumerate_vertices(lp);
    CAPTURE(t);
    if (!ref.feasible) {
      CHECK(out.status == LpStatus::Infeasible);
      ++infeasible;
    } else {
      REQUIRE(out.status == LpStatus::Optimal);
      CHECK(std::abs(out.objective - ref.best) <= 1e-7 * (1.0 + std::abs(ref.best)));
      ++optimal;
    }
    check_certificates(lp, out);
  }
  CHECK(optimal > 50);
  CHECK(infeasible > 5);
}

TEST_CASE("a duplicated row leaves the optimum unchanged") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 30; ++t) {
    auto lp = random_lp(rng, 4, 3, true);
    const auto base = solve_lp(lp);
    lp.rows.push_back(lp.rows[static_cast<std::size_t>(t) % lp.rows.size()]);
    const auto dup = solve_lp(lp);
    REQUIRE(base.status == dup.status);
    if (base.status == LpStatus::Optimal) CHECK(std::abs(base.objective - dup.objective) <= 1e-9);
  }
}

TEST_CASE("warm start after adding columns matches a cold solve") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    auto lp = random_lp(rng, 3, 4, true);
    SimplexSolver solver(lp);
    solver.solve();
    std::vector<double> extra(lp.num_rows());
    for (auto& e : extra) e = static_cast<double>(static_cast<int>(rng() % 7)) - 2.0;
    extra.back() = 1.0;
    const double cost = static_cast<double>(rng() % 9);
    solver.add_column(cost, extra);
    const auto warm = solver.solve();
    const int v = lp.add_variable(cost);
    for (int i = 0; i < lp.num_rows(); ++i) lp.rows[i].coefficients[v] = extra[i];
    const auto cold = solve_lp(lp);
    REQUIRE(warm.status == cold.status);
    if (cold.status == LpStatus::Optimal) CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-9));
  }
}

TEST_CASE("holding variables at zero matches removing them") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 40; ++t) {
    auto lp = random_lp(rng, 5, 3, true);
    SimplexSolver solver(lp);
    solver.solve();
    const int held = static_cast<int>(rng() % 5);
    solver.set_fixed_zero(held, true);
    const auto warm = solver.solve();
    auto reduced = lp;
    reduced.add_row([&] {
      std::vector<double> e(lp.num_vars(), 0.0);
      e[held] = 1.0;
      return e;
    }(), Relation::LessEq, 0.0);
    const auto cold = solve_lp(reduced);
    CAPTURE(t);
    REQUIRE(warm.status == cold.status);
    if (cold.status == LpStatus::Optimal) {
      CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-9));
      CHECK(std::abs(warm.primal[held]) <= 1e-9);
    }
    solver.set_fixed_zero(held, false);
    const auto back = solver.solve();
    const auto orig = solve_lp(lp);
    REQUIRE(back.status == orig.status);
    if (orig.status == LpStatus::Optimal) CHECK(back.objective == doctest::Approx(orig.objective).epsilon(1e-9));
  }
}

TEST_CASE("pivot trace and LP text") {
  LinearProgram lp;
  lp.add_variable(1.0);
  lp.add_variable(2.0);
  lp.add_row({1, 1}, Relation::LessEq, 4.0);
  lp.add_row({1, 3}, Relation::LessEq, 6.0);
  std::ostringstream trace;
  const auto out = solve_lp(lp, &trace);
  CHECK(out.objective == doctest::Approx(5.0));
  CHECK(trace.str().rfind("pivot 1 phase 2 enter", 0) == 0);
  const auto text = render_lp_text(lp, {"x", "y"}, {"cap", "mix"});
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find(" cap: 1 x + 1 y <= 4") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

TEST_CASE("malformed programs are rejected") {
  LinearProgram lp;
  lp.add_variable(1.0);
  CHECK_THROWS_AS(lp.add_row({1, 2}, Relation::LessEq, 1), std::invalid_argument);
  lp.upper[0] = 2.0;
  CHECK_THROWS_AS(lp.validate(), std::invalid_argument);
}
