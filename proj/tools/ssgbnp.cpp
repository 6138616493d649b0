#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssgbnp/bench.hpp"
#include "ssgbnp/engine.hpp"
#include "ssgbnp/instgen.hpp"
#include "ssgbnp/master.hpp"
#include "ssgbnp/oracle.hpp"
#include "ssgbnp/pricing.hpp"

namespace fs = std::filesystem;
using namespace ssgbnp;

namespace {

enum class LogLevel { Off, Node, Pivot };

LogLevel log_level() {
  const char* env = std::getenv("SSGBNP_LOG");
  if (env == nullptr) return LogLevel::Off;
  const std::string v = env;
  if (v == "node") return LogLevel::Node;
  if (v == "pivot") return LogLevel::Pivot;
  if (v != "off" && !v.empty()) std::cerr << "warning: unknown SSGBNP_LOG value '" << v << "', using off\n";
  return LogLevel::Off;
}

FormulationSpec make_spec(const std::string& formulation, const std::string& cuts, bool cuts_given) {
  FormulationSpec spec;
  spec.base = parse_formulation(formulation);
  spec.scope = parse_cut_scope(cuts);
  if (spec.base == Formulation::D2 && cuts_given) {
    std::cerr << "warning: --cuts is ignored for d2 (it has no valid-inequality rows)\n";
  }
  return spec;
}

struct SolveArgs {
  std::string instance;
  std::string formulation = "d2plus";
  std::string cuts = "both";
  int init_cols = -1;
  int pricer_cols = 1;
  double delta = 0.0;
  double time_limit = 3600.0;
  std::uint64_t seed = 0;
  std::string strategy_out;
};

int run_solve(const SolveArgs& a, bool cuts_given, bool delta_given) {
  const auto spec = make_spec(a.formulation, a.cuts, cuts_given);
  SolveOptions opts;
  opts.init_cols = a.init_cols;
  opts.pricer_cols = a.pricer_cols;
  if (delta_given) opts.delta = a.delta;
  opts.time_limit_s = a.time_limit;
  opts.seed = a.seed;
  const auto level = log_level();
  if (level != LogLevel::Off) opts.node_log = &std::cerr;
  if (level == LogLevel::Pivot) opts.pivot_trace = &std::cerr;

  auto inst = load_instance(a.instance);
  SolveReport rep;
  if (auto* sg = std::get_if<GameSG>(&inst)) {
    auto res = solve_sg(*sg, spec, opts);
    rep = res.report;
  } else {
    const auto& g = std::get<GameSSG>(inst);
    auto res = solve(g, spec, opts);
    rep = res.report;
    if (!a.strategy_out.empty()) {
      std::ofstream out(a.strategy_out);
      if (!out) throw std::runtime_error("cannot write " + a.strategy_out);
      out << strategy_json(res.strategy) << '\n';
    }
  }
  std::cout << report_json(rep) << '\n';
  switch (rep.status) {
    case SolveStatus::Optimal: return 0;
    case SolveStatus::TimeLimit: return 2;
    default: return 1;
  }
}

std::vector<fs::path> instance_files(const std::string& dir) {
  std::vector<fs::path> out;
  if (fs::is_regular_file(dir)) return {fs::path(dir)};
  if (!fs::is_directory(dir)) throw std::runtime_error("no such instance directory: " + dir);
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branch-and-price solver for budget-constrained Bayesian security games"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write the (n, k, h) instance grid");
  std::vector<int> gen_n, gen_k;
  std::vector<std::int64_t> gen_seeds{0};
  int gen_H = 5;
  std::string gen_out = ".";
  gen->add_option("--n", gen_n, "Target counts")->required()->delimiter(',');
  gen->add_option("--k", gen_k, "Attacker type counts")->required()->delimiter(',');
  gen->add_option("--H", gen_H, "Instances per (n, k); h runs over 1..H")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seeds, "Seeds")->delimiter(',');
  gen->add_option("--out", gen_out, "Output directory");

  // solve
  auto* sol = app.add_subcommand("solve", "Solve one instance and print the report as JSON");
  SolveArgs sa;
  sol->add_option("instance", sa.instance, "Instance file")->required();
  sol->add_option("--formulation", sa.formulation)->check(CLI::IsMember({"d2", "d2plus", "d2plusprime"}));
  auto* cuts_opt = sol->add_option("--cuts", sa.cuts)->check(CLI::IsMember({"attacker", "defender", "both"}));
  sol->add_option("--init-cols", sa.init_cols, "GRASP initial columns (default: number of targets)");
  sol->add_option("--pricer-cols", sa.pricer_cols)->check(CLI::PositiveNumber);
  auto* delta_opt = sol->add_option("--stabilize", sa.delta, "Stabilization parameter in (0, 1]");
  sol->add_option("--time-limit", sa.time_limit, "Seconds");
  sol->add_option("--seed", sa.seed);
  sol->add_option("--strategy", sa.strategy_out, "Write the mixed strategy as JSON");

  // bench
  auto* bch = app.add_subcommand("bench", "Run every instance against every variant and emit CSV");
  std::string bench_dir, bench_out;
  std::vector<std::string> bench_variants{"d2", "d2plus:both"};
  BenchOptions bopt;
  int bench_init = -1, bench_pricer = 1;
  double bench_delta = 0.0;
  bch->add_option("instances", bench_dir, "Instance directory or file")->required();
  bch->add_option("--variants", bench_variants, "e.g. d2,d2plus:attacker,d2plusprime:both")->delimiter(',');
  bch->add_option("--jobs", bopt.jobs)->check(CLI::PositiveNumber);
  bch->add_option("--time-limit", bopt.time_limit_s);
  bch->add_option("--seed", bopt.seed);
  bch->add_option("--init-cols", bench_init);
  bch->add_option("--pricer-cols", bench_pricer)->check(CLI::PositiveNumber);
  auto* bench_delta_opt = bch->add_option("--stabilize", bench_delta);
  bch->add_option("--out", bench_out, "CSV file (default: stdout)");

  // summary
  auto* sum = app.add_subcommand("summary", "Aggregate a bench CSV and check root-LP dominance");
  std::string sum_csv;
  sum->add_option("csv", sum_csv)->required();

  // verify
  auto* ver = app.add_subcommand("verify", "Compare the engine with the brute-force oracle");
  int ver_count = 50;
  std::uint64_t ver_seed = 0;
  double ver_perturb = 0.0;
  std::vector<std::string> ver_variants;
  ver->add_option("--count", ver_count, "Battery size")->check(CLI::NonNegativeNumber);
  ver->add_option("--seed", ver_seed);
  ver->add_option("--perturb", ver_perturb, "Shift d_prot of target 1 in the engine's copy");
  ver->add_option("--variants", ver_variants, "Default: all seven")->delimiter(',');

  // lp
  auto* lpc = app.add_subcommand("lp", "Print the master LP over the initial columns in LP text format");
  std::string lp_instance, lp_form = "d2plus", lp_cuts = "both";
  int lp_init = -1;
  lpc->add_option("instance", lp_instance)->required();
  lpc->add_option("--formulation", lp_form)->check(CLI::IsMember({"d2", "d2plus", "d2plusprime"}));
  lpc->add_option("--cuts", lp_cuts)->check(CLI::IsMember({"attacker", "defender", "both"}));
  lpc->add_option("--init-cols", lp_init);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      fs::create_directories(gen_out);
      for (int n : gen_n) {
        for (int k : gen_k) {
          for (int h = 1; h <= gen_H; ++h) {
            for (auto s : gen_seeds) {
              const auto path = fs::path(gen_out) / instance_filename(n, k, h, s);
              save_instance(generate(n, k, h, gen_H, s), path);
              std::cout << path.string() << '\n';
            }
          }
        }
      }
      return 0;
    }
    if (*sol) return run_solve(sa, cuts_opt->count() > 0, delta_opt->count() > 0);
    if (*bch) {
      std::vector<Variant> variants;
      for (const auto& v : bench_variants) {
        auto var = parse_variant(v);
        var.init_cols = bench_init;
        var.pricer_cols = bench_pricer;
        if (bench_delta_opt->count() > 0) var.delta = bench_delta;
        variants.push_back(var);
      }
      const auto rows = run_bench(instance_files(bench_dir), variants, bopt);
      std::ostringstream csv;
      csv << kBenchHeader << '\n';
      for (const auto& r : rows) csv << render_row(r) << '\n';
      if (bench_out.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream out(bench_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + bench_out);
        out << csv.str();
      }
      return 0;
    }
    if (*sum) {
      const auto s = summarize(parse_csv(read_file(sum_csv)));
      std::cout << render_summary(s);
      return s.dominance_violations.empty() ? 0 : 1;
    }
    if (*ver) {
      std::vector<FormulationSpec> variants;
      if (ver_variants.empty()) {
        variants = all_variants();
      } else {
        for (const auto& v : ver_variants) variants.push_back(parse_variant(v).spec);
      }
      const auto battery = verify_battery(ver_count, ver_seed);
      if (battery.empty()) {
        std::cerr << "warning: empty battery, nothing to verify\n";
        std::cout << "PASS 0 checks\n";
        return 0;
      }
      const auto res = verify(battery, variants, ver_perturb);
      for (const auto& f : res.failures) std::cout << "FAIL " << f << '\n';
      if (res.failures.empty()) {
        std::cout << "PASS " << res.checked << " checks\n";
        return 0;
      }
      std::cout << res.failures.size() << " of " << res.checked << " checks failed\n";
      return 1;
    }
    if (*lpc) {
      const auto g = load_ssg(lp_instance);
      const auto spec = make_spec(lp_form, lp_cuts, false);
      const auto cols = initial_columns(g, lp_init < 0 ? g.n_targets : lp_init, 0);
      const auto m = build_master(g, cols, spec);
      std::cout << render_lp_text(m.lp, m.var_names, m.row_names);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
