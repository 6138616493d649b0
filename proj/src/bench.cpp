#include "ssgbnp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "ssgbnp/instgen.hpp"
#include "ssgbnp/oracle.hpp"

namespace ssgbnp {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double finite_or_nan(double v) { return std::isfinite(v) ? v : std::nan(""); }

}  // namespace

Variant parse_variant(const std::string& text) {
  Variant v;
  const auto colon = text.find(':');
  v.spec.base = parse_formulation(text.substr(0, colon));
  if (colon != std::string::npos) v.spec.scope = parse_cut_scope(text.substr(colon + 1));
  return v;
}

std::string variant_label(const FormulationSpec& spec) {
  if (spec.base == Formulation::D2) return "d2";
  return to_string(spec.base) + ":" + to_string(spec.scope);
}

std::string render_row(const BenchRow& r) {
  std::ostringstream os;
  os << r.instance << ',' << r.formulation << ',' << r.cuts << ',' << r.init_cols << ',' << r.pricer_cols << ','
     << (r.delta ? fmt("%g", *r.delta) : std::string()) << ',' << r.status << ',' << fmt("%.10g", r.objective)
     << ',' << fmt("%.6f", r.time_s) << ',' << r.nodes << ',' << fmt("%.10g", r.root_lp_value) << ','
     << fmt("%.6f", r.root_gap_pct) << ',' << r.columns_generated << ',' << r.pricing_iterations;
  return os.str();
}

std::vector<BenchRow> parse_csv(const std::string& text) {
  std::vector<BenchRow> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line != kBenchHeader) throw std::invalid_argument("unexpected CSV header");
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 14) throw std::invalid_argument("CSV line " + std::to_string(lineno) + " has " +
                                                    std::to_string(f.size()) + " fields");
    BenchRow r;
    r.instance = f[0];
    r.formulation = f[1];
    r.cuts = f[2];
    r.init_cols = std::stoi(f[3]);
    r.pricer_cols = std::stoi(f[4]);
    if (!f[5].empty()) r.delta = std::stod(f[5]);
    r.status = f[6];
    r.objective = std::stod(f[7]);
    r.time_s = std::stod(f[8]);
    r.nodes = std::stol(f[9]);
    r.root_lp_value = std::stod(f[10]);
    r.root_gap_pct = std::stod(f[11]);
    r.columns_generated = std::stol(f[12]);
    r.pricing_iterations = std::stol(f[13]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<BenchRow> run_bench(const std::vector<std::filesystem::path>& instances,
                                const std::vector<Variant>& variants, const BenchOptions& opts) {
  auto files = instances;
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  const std::size_t total = files.size() * variants.size();
  std::vector<BenchRow> rows(total);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const auto& path = files[idx / variants.size()];
      const auto& v = variants[idx % variants.size()];
      BenchRow& row = rows[idx];
      row.instance = path.filename().string();
      row.formulation = to_string(v.spec.base);
      row.cuts = v.spec.base == Formulation::D2 ? "none" : to_string(v.spec.scope);
      row.pricer_cols = v.pricer_cols;
      row.delta = v.delta;
      row.init_cols = v.init_cols;
      try {
        const GameSSG g = load_ssg(path);
        SolveOptions so;
        so.init_cols = v.init_cols < 0 ? g.n_targets : v.init_cols;
        so.pricer_cols = v.pricer_cols;
        so.delta = v.delta;
        so.time_limit_s = opts.time_limit_s;
        so.seed = opts.seed;
        row.init_cols = so.init_cols;
        const auto res = solve(g, v.spec, so);
        const auto& rep = res.report;
        row.status = to_string(rep.status);
        row.objective = finite_or_nan(rep.objective);
        row.time_s = rep.wall_time_s;
        row.nodes = rep.nodes;
        row.root_lp_value = rep.root_lp_value;
        row.root_gap_pct = rep.root_gap_pct;
        row.columns_generated = rep.columns_generated;
        row.pricing_iterations = rep.pricing_iterations;
      } catch (const std::exception&) {
        row.status = "error";
        row.objective = std::nan("");
      }
    }
  };

  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(std::max<std::size_t>(1, total))));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

BenchSummary summarize(const std::vector<BenchRow>& rows) {
  struct Group {
    const BenchRow* d2 = nullptr;
    const BenchRow* plus = nullptr;
    const BenchRow* prime = nullptr;
  };
  std::map<std::string, Group> groups;
  for (const auto& r : rows) {
    if (r.delta || r.status != "Optimal") continue;
    auto& g = groups[r.instance];
    if (r.formulation == "d2") g.d2 = &r;
    if (r.formulation == "d2plus" && r.cuts == "both") g.plus = &r;
    if (r.formulation == "d2plusprime" && r.cuts == "both") g.prime = &r;
  }
  BenchSummary s;
  double cols_d2 = 0, cols_plus = 0, t_d2 = 0, t_plus = 0, n_d2 = 0, n_plus = 0;
  for (const auto& [name, g] : groups) {
    if (g.d2 && g.plus) {
      ++s.paired_instances;
      cols_d2 += g.d2->columns_generated;
      cols_plus += g.plus->columns_generated;
      t_d2 += g.d2->time_s;
      t_plus += g.plus->time_s;
      n_d2 += g.d2->nodes;
      n_plus += g.plus->nodes;
      if (g.plus->root_lp_value > g.d2->root_lp_value + 1e-6) s.dominance_violations.push_back(name + " (d2plus > d2)");
    }
    if (g.plus && g.prime && g.prime->root_lp_value > g.plus->root_lp_value + 1e-6) {
      s.dominance_violations.push_back(name + " (d2plusprime > d2plus)");
    }
  }
  if (s.paired_instances > 0) {
    s.column_ratio = cols_d2 > 0 ? cols_plus / cols_d2 : 0.0;
    s.time_ratio = t_d2 > 0 ? t_plus / t_d2 : 0.0;
    s.mean_nodes_d2 = n_d2 / s.paired_instances;
    s.mean_nodes_d2plus = n_plus / s.paired_instances;
  }
  return s;
}

std::string render_summary(const BenchSummary& s) {
  std::ostringstream os;
  os << "paired instances: " << s.paired_instances << '\n'
     << "column ratio d2plus/d2: " << fmt("%.4f", s.column_ratio) << '\n'
     << "time ratio d2plus/d2: " << fmt("%.4f", s.time_ratio) << '\n'
     << "mean nodes d2: " << fmt("%.2f", s.mean_nodes_d2) << '\n'
     << "mean nodes d2plus: " << fmt("%.2f", s.mean_nodes_d2plus) << '\n'
     << "root dominance: " << (s.dominance_violations.empty() ? "ok" : "VIOLATED") << '\n';
  for (const auto& v : s.dominance_violations) os << "  " << v << '\n';
  return os.str();
}

std::vector<NamedGame> verify_battery(int count, std::uint64_t seed) {
  std::vector<NamedGame> out;
  for (int i = 0; i < count; ++i) {
    const int n = 3 + i % 4;
    const int k = 1 + (i / 4) % 2;
    const int h = 1 + (i / 8) % 5;
    const auto s = static_cast<std::int64_t>(seed) + i;
    out.push_back({instance_filename(n, k, h, s), generate(n, k, h, 5, s)});
  }
  return out;
}

VerifyOutcome verify(const std::vector<NamedGame>& battery, const std::vector<FormulationSpec>& variants,
                     double perturb, double tol) {
  VerifyOutcome out;
  for (const auto& [name, game] : battery) {
    const double expected = solve_multiple_lps(game).value;
    GameSSG engine_game = game;
    for (int k = 0; k < engine_game.n_attackers; ++k) engine_game.d_prot[k][0] += perturb;
    for (const auto& spec : variants) {
      ++out.checked;
      const std::string tag = name + " [" + variant_label(spec) + "]";
      try {
        const auto res = solve(engine_game, spec);
        if (res.report.status != SolveStatus::Optimal) {
          out.failures.push_back(tag + ": status " + to_string(res.report.status));
          continue;
        }
        if (std::abs(res.report.objective - expected) > tol) {
          out.failures.push_back(tag + ": engine " + fmt("%.9f", res.report.objective) + " oracle " +
                                 fmt("%.9f", expected));
          continue;
        }
        const auto problem = check_mixed_strategy(engine_game, res.strategy);
        if (!problem.empty()) out.failures.push_back(tag + ": " + problem);
      } catch (const std::exception& e) {
        out.failures.push_back(tag + ": " + e.what());
      }
    }
  }
  return out;
}

std::string report_json(const SolveReport& r) {
  nlohmann::ordered_json j;
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(); };
  j["status"] = to_string(r.status);
  j["objective"] = num(r.objective);
  j["best_bound"] = num(r.best_bound);
  j["time_s"] = r.wall_time_s;
  j["nodes"] = r.nodes;
  j["root_lp_value"] = r.root_lp_value;
  j["root_gap_pct"] = r.root_gap_pct;
  j["columns_generated"] = r.columns_generated;
  j["pricing_iterations"] = r.pricing_iterations;
  j["farkas_calls"] = r.farkas_calls;
  j["mispricings"] = r.mispricings;
  j["initial_columns"] = r.initial_columns;
  j["formulation"] = r.formulation;
  j["cuts"] = r.cuts;
  return j.dump(2);
}

std::string strategy_json(const MixedStrategy& s) {
  nlohmann::ordered_json j;
  j["support"] = nlohmann::ordered_json::array();
  for (const auto& e : s.support) {
    std::vector<int> targets;
    for (int t = 0; t < e.column.size(); ++t) {
      if (e.column.covers(t)) targets.push_back(t + 1);
    }
    j["support"].push_back({{"targets", targets}, {"probability", e.probability}});
  }
  j["responses"] = nlohmann::ordered_json::array();
  for (const auto& r : s.responses) {
    j["responses"].push_back(
        {{"target", r.target + 1}, {"defender_utility", r.defender_utility}, {"attacker_utility", r.attacker_utility}});
  }
  return j.dump(2);
}

}  // namespace ssgbnp
