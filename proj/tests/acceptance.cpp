// Acceptance gate: one PASS/FAIL line per criterion. Criterion 7 is reported
// but does not affect the exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ssgbnp/bench.hpp"
#include "ssgbnp/engine.hpp"
#include "ssgbnp/instgen.hpp"
#include "ssgbnp/oracle.hpp"
#include "ssgbnp/pricing.hpp"
#include "support/lp_reference.hpp"

using namespace ssgbnp;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<FormulationSpec> headline_variants() {
  return {{Formulation::D2}, {Formulation::D2Plus, CutScope::Both}, {Formulation::D2PlusPrime, CutScope::Both}};
}

// The desk-scale benchmark grid shared by criteria 2 and 7.
std::vector<NamedGame> benchmark_grid() {
  std::vector<NamedGame> out;
  for (int n : {10, 15}) {
    for (int k : {2, 4}) {
      for (int h = 1; h <= 5; ++h) {
        for (int seed : {1, 2}) out.push_back({instance_filename(n, k, h, seed), generate(n, k, h, 5, seed)});
      }
    }
  }
  return out;
}

// Criteria 1 and 3 share one pass over the oracle battery.
struct OracleSweep {
  long mismatches = 0;
  long not_optimal = 0;
  long invalid_strategies = 0;
  double worst_error = 0.0;
  double worst_spread = 0.0;
  std::string first_problem;
  double seconds = 0.0;
};

OracleSweep run_oracle_sweep() {
  OracleSweep s;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [name, g] : verify_battery(50, 0)) {
    const double oracle = solve_multiple_lps(g).value;
    double lo = kInf, hi = -kInf;
    for (const auto& spec : all_variants()) {
      const auto r = solve(g, spec);
      const std::string tag = name + " [" + variant_label(spec) + "]";
      if (r.report.status != SolveStatus::Optimal) {
        ++s.not_optimal;
        if (s.first_problem.empty()) s.first_problem = tag + " status " + to_string(r.report.status);
        continue;
      }
      const double err = std::abs(r.report.objective - oracle);
      s.worst_error = std::max(s.worst_error, err);
      if (err > 1e-6) {
        ++s.mismatches;
        if (s.first_problem.empty()) s.first_problem = tag + " off by " + fmt("%.3g", err);
      }
      if (!check_mixed_strategy(g, r.strategy).empty()) ++s.invalid_strategies;
      lo = std::min(lo, r.report.objective);
      hi = std::max(hi, r.report.objective);
    }
    if (hi >= lo) s.worst_spread = std::max(s.worst_spread, hi - lo);
  }
  s.seconds = seconds_since(t0);
  return s;
}

Verdict criterion_1(const OracleSweep& s) {
  Verdict v;
  v.pass = s.mismatches == 0 && s.not_optimal == 0 && s.invalid_strategies == 0;
  v.detail = "50 instances x 7 variants, max |engine - oracle| = " + fmt("%.2e", s.worst_error) + ", " +
             std::to_string(s.invalid_strategies) + " invalid strategies, " + fmt("%.1f", s.seconds) + " s";
  if (!s.first_problem.empty()) v.detail += "; first: " + s.first_problem;
  return v;
}

Verdict criterion_2() {
  auto games = benchmark_grid();
  for (auto& g : verify_battery(50, 0)) games.push_back(std::move(g));
  Verdict v;
  long checked = 0;
  double worst = -kInf;
  for (const auto& [name, g] : games) {
    std::vector<double> root;
    for (const auto& spec : headline_variants()) {
      const auto r = solve_root_lp(g, spec);
      root.push_back(r.status == NodeStatus::Optimal ? r.value : kInf);
    }
    ++checked;
    const double excess = std::max(root[1] - root[0], root[2] - root[1]);
    worst = std::max(worst, excess);
    if (excess > 1e-6) {
      if (v.pass) v.detail = "violated on " + name + "; ";
      v.pass = false;
    }
  }
  v.detail += std::to_string(checked) + " instances, max(LP(plus) - LP(d2), LP(prime) - LP(plus)) = " +
              fmt("%.3g", worst);
  return v;
}

Verdict criterion_3(const OracleSweep& s) {
  Verdict v;
  v.pass = s.worst_spread <= 1e-6 && s.not_optimal == 0;
  v.detail = "max objective spread across 7 variants = " + fmt("%.2e", s.worst_spread);
  return v;
}

// Subset enumeration written independently of the knapsack solvers.
double best_subset(const std::vector<double>& pi, const std::vector<double>& w, double W) {
  const int n = static_cast<int>(pi.size());
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double cost = 0.0, value = 0.0;
    for (int j = 0; j < n; ++j) {
      if ((mask >> j) & 1u) {
        cost += w[j];
        value += pi[j];
      }
    }
    if (cost <= W) best = std::max(best, value);
  }
  return best;
}

Verdict criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> d(-24, 48);
  long exact = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 15;
    const auto g = generate(n, 1 + t % 3, 1 + t % 5, 5, 7000 + t);
    DualView dv = DualView::zeros(g.n_attackers, n);
    for (int k = 0; k < g.n_attackers; ++k) {
      for (int j = 0; j < n; ++j) {
        dv.w[k][j] = d(rng) / 16.0;
        dv.y[k][j] = std::max(0, d(rng)) / 32.0;
        dv.z[k][j] = std::max(0, d(rng)) / 32.0;
      }
    }
    dv.h = d(rng) / 8.0;
    const auto res = price_exact(g, dv);
    const double ref = best_subset(pricing_profits(g, dv), g.w, g.budget) - dv.h;
    if (res.value == ref && res.column.affordable(g) && reduced_cost(g, res.column, dv) == res.value) ++exact;
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = exact == 100 && secs < 10.0;
  v.detail = std::to_string(exact) + "/100 dual vectors exact (n <= 15), " + fmt("%.2f", secs) + " s";
  return v;
}

Verdict criterion_5() {
  GameSSG g;
  g.n_targets = 2;
  g.n_attackers = 2;
  g.p = {0.5, 0.5};
  g.d_prot = {{8, 7}, {9, 6}};
  g.d_unprot = {{2, 3}, {1, 4}};
  g.a_prot = {{2, 1}, {1, 2}};
  g.a_unprot = {{8, 5}, {6, 7}};
  g.w = {1, 1};
  g.budget = 1.5;
  validate(g);
  Fixings fx(2, 2);
  fx.set(0, 0, FixState::One);
  const FormulationSpec spec{Formulation::D2Plus};
  const auto far = std::chrono::steady_clock::now() + std::chrono::hours(1);
  Verdict v;

  // One column, one q-fixing: infeasible until Farkas pricing adds a column.
  std::vector<Column> cols{Column::singleton(2, 0)};
  const auto m = build_master(g, cols, spec, fx);
  const auto out = solve_lp(m.lp);
  bool recovered = false;
  if (out.status == LpStatus::Infeasible) {
    const auto ray = dual_view(m.layout, out.farkas);
    if (const auto col = farkas_price(g, ray); col && farkas_contribution(g, *col, ray) < -1e-9) {
      cols.push_back(*col);
      recovered = solve_lp(build_master(g, cols, spec, fx).lp).status == LpStatus::Optimal;
    }
  }

  SolveOptions opts;
  ColumnPool sparse_pool;
  sparse_pool.add(Column::singleton(2, 0));
  ColgenCounters sparse;
  const bool sparse_ok = ColumnGeneration(g, spec, opts, sparse_pool, sparse, far).run(fx).status ==
                         NodeStatus::Optimal;

  ColumnPool full_pool;
  for (const auto& c : initial_columns(g, 2, 0)) full_pool.add(c);
  ColgenCounters full;
  const bool full_ok =
      ColumnGeneration(g, spec, opts, full_pool, full, far).run(fx).status == NodeStatus::Optimal;

  v.pass = recovered && sparse_ok && sparse.farkas_calls > 0 && full_ok && full.farkas_calls == 0;
  v.detail = std::string("single column ") + (recovered ? "recovered" : "NOT recovered") +
             "; node colgen farkas_calls sparse = " + std::to_string(sparse.farkas_calls) +
             ", with singletons = " + std::to_string(full.farkas_calls);
  return v;
}

Verdict criterion_6() {
  using namespace lp_reference;
  std::mt19937_64 rng(6);
  long agree = 0, optimal = 0;
  double worst_cert = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int m = 1 + static_cast<int>(rng() % 5);
    const auto lp = random_lp(rng, n, m, true);
    const auto out = solve_lp(lp);
    const auto ref = enumerate_vertices(lp);
    if (!ref.feasible) {
      agree += out.status == LpStatus::Infeasible;
      continue;
    }
    if (out.status != LpStatus::Optimal) continue;
    ++optimal;
    if (std::abs(out.objective - ref.best) <= 1e-7) ++agree;
    const auto e = certificate_error(lp, out);
    worst_cert = std::max({worst_cert, e.dual, e.slackness, e.gap});
  }
  Verdict v;
  v.pass = agree == 200 && worst_cert <= 1e-7;
  v.detail = std::to_string(agree) + "/200 agree with vertex enumeration (" + std::to_string(optimal) +
             " optimal), worst certificate violation " + fmt("%.2e", worst_cert);
  return v;
}

struct GridResult {
  BenchSummary summary;
  long errors = 0;
  double seconds = 0.0;
};

GridResult run_grid() {
  const auto dir = fs::temp_directory_path() / "ssgbnp_acceptance_grid";
  fs::create_directories(dir);
  std::vector<fs::path> files;
  for (const auto& [name, g] : benchmark_grid()) {
    files.push_back(dir / name);
    save_instance(g, files.back());
  }
  BenchOptions opts;
  opts.time_limit_s = 600;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_bench(files, {parse_variant("d2"), parse_variant("d2plus:both")}, opts);
  GridResult r;
  r.seconds = seconds_since(t0);
  r.summary = summarize(rows);
  for (const auto& row : rows) r.errors += row.status != "Optimal";
  return r;
}

Verdict criterion_7(const GridResult& g) {
  Verdict v;
  const auto& s = g.summary;
  v.pass = s.paired_instances > 0 && s.column_ratio <= 0.9 && s.time_ratio <= 1.0;
  v.detail = "columns(D2plus)/columns(D2) = " + fmt("%.3f", s.column_ratio) +
             ", time(D2plus)/time(D2) = " + fmt("%.3f", s.time_ratio) + ", mean nodes " +
             fmt("%.1f", s.mean_nodes_d2) + " vs " + fmt("%.1f", s.mean_nodes_d2plus) + " over " +
             std::to_string(s.paired_instances) + " paired instances, " + std::to_string(g.errors) +
             " non-optimal rows, " + fmt("%.0f", g.seconds) + " s (soft, not gated)";
  return v;
}

Verdict criterion_8() {
  Verdict v;
  double worst = 0.0;
  long runs = 0;
  for (int i = 0; i < 20; ++i) {
    const auto g = generate(8 + i % 5, 1 + i % 3, 1 + i % 5, 5, 800 + i);
    const FormulationSpec spec{i % 2 ? Formulation::D2 : Formulation::D2Plus};
    const double plain = solve_root_lp(g, spec).value;
    for (double delta : {0.1, 0.5, 0.9}) {
      SolveOptions opts;
      opts.delta = delta;
      const auto r = solve_root_lp(g, spec, opts);
      ++runs;
      const double err = r.status == NodeStatus::Optimal ? std::abs(r.value - plain) : kInf;
      worst = std::max(worst, err);
    }
  }
  v.pass = worst <= 1e-6;
  v.detail = std::to_string(runs) + " stabilized root LPs, max |LP(delta) - LP| = " + fmt("%.2e", worst);
  return v;
}

Verdict criterion_9() {
  Verdict v;
  long repeats = 0;
  for (int i = 0; i < 6; ++i) {
    const auto g = generate(10 + i % 3, 2 + i % 2, 1 + i % 5, 5, 900 + i);
    SolveOptions opts;
    if (i % 2) opts.delta = 0.5;
    opts.pricer_cols = 1 + i % 3;
    for (const auto& spec : headline_variants()) {
      const auto a = solve(g, spec, opts).report;
      const auto b = solve(g, spec, opts).report;
      ++repeats;
      const bool same = a.nodes == b.nodes && a.columns_generated == b.columns_generated &&
                        a.pricing_iterations == b.pricing_iterations && a.mispricings == b.mispricings &&
                        a.farkas_calls == b.farkas_calls && a.objective == b.objective;
      if (!same && v.pass) {
        v.pass = false;
        v.detail = "differs on seed " + std::to_string(900 + i) + " [" + variant_label(spec) + "]; ";
      }
    }
  }
  v.detail += std::to_string(repeats) + " repeated solves with identical node, column and iteration counts";
  if (!v.pass) v.detail = "not all " + v.detail;
  return v;
}

void report(int id, const Verdict& v, bool& ok, bool gated = true) {
  std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", id, v.detail.c_str());
  std::fflush(stdout);
  if (gated && !v.pass) ok = false;
}

}  // namespace

int main() {
  bool ok = true;
  const auto sweep = run_oracle_sweep();
  report(1, criterion_1(sweep), ok);
  report(2, criterion_2(), ok);
  report(3, criterion_3(sweep), ok);
  report(4, criterion_4(), ok);
  report(5, criterion_5(), ok);
  report(6, criterion_6(), ok);
  report(7, criterion_7(run_grid()), ok, false);
  report(8, criterion_8(), ok);
  report(9, criterion_9(), ok);
  return ok ? 0 : 1;
}
