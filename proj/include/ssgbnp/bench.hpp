#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ssgbnp/engine.hpp"

namespace ssgbnp {

inline constexpr const char* kBenchHeader =
    "instance,formulation,cuts,init_cols,pricer_cols,delta,status,objective,time_s,nodes,"
    "root_lp_value,root_gap_pct,columns_generated,pricing_iterations";

/// Solver configuration for one benchmark column. `init_cols` < 0 means the
/// instance's target count.
struct Variant {
  FormulationSpec spec;
  int init_cols = -1;
  int pricer_cols = 1;
  std::optional<double> delta;
};

/// "d2", "d2plus:attacker", "d2plusprime:both", ... (scope defaults to both).
Variant parse_variant(const std::string& text);
std::string variant_label(const FormulationSpec& spec);

struct BenchRow {
  std::string instance;
  std::string formulation;
  std::string cuts;
  int init_cols = 0;
  int pricer_cols = 1;
  std::optional<double> delta;
  std::string status;
  double objective = 0.0;
  double time_s = 0.0;
  long nodes = 0;
  double root_lp_value = 0.0;
  double root_gap_pct = 0.0;
  long columns_generated = 0;
  long pricing_iterations = 0;
};

std::string render_row(const BenchRow& row);
std::vector<BenchRow> parse_csv(const std::string& text);

struct BenchOptions {
  double time_limit_s = 3600.0;
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Solves every (instance, variant) pair. Rows come back sorted by instance
/// file name, then by variant position; failures carry status "error".
std::vector<BenchRow> run_bench(const std::vector<std::filesystem::path>& instances,
                                const std::vector<Variant>& variants, const BenchOptions& opts);

struct BenchSummary {
  long paired_instances = 0;     // instances with Optimal D2 and D2plus(both) rows
  double column_ratio = 0.0;     // sum columns(D2plus) / sum columns(D2)
  double time_ratio = 0.0;       // sum time(D2plus) / sum time(D2)
  double mean_nodes_d2 = 0.0;
  double mean_nodes_d2plus = 0.0;
  std::vector<std::string> dominance_violations;  // instances where the root LP order fails
};

/// Compares D2 with D2plus(both), and D2plus(both) with D2plusPrime(both) for
/// root dominance, across rows that share an instance.
BenchSummary summarize(const std::vector<BenchRow>& rows);
std::string render_summary(const BenchSummary& s);

struct NamedGame {
  std::string name;
  GameSSG game;
};

/// Small seeded instances: n cycles over 3..6, k over 1..2, h over 1..5 (H = 5).
std::vector<NamedGame> verify_battery(int count, std::uint64_t seed);

struct VerifyOutcome {
  long checked = 0;
  std::vector<std::string> failures;
};

/// Engine against the multiple-LPs oracle for every variant. `perturb` is added
/// to d_prot of the first target in the engine's copy of each instance.
VerifyOutcome verify(const std::vector<NamedGame>& battery, const std::vector<FormulationSpec>& variants,
                     double perturb = 0.0, double tol = 1e-6);

std::string report_json(const SolveReport& r);
std::string strategy_json(const MixedStrategy& s);

}  // namespace ssgbnp
