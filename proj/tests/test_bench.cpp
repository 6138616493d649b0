#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ssgbnp/bench.hpp"
#include "ssgbnp/instgen.hpp"

using namespace ssgbnp;
namespace fs = std::filesystem;

namespace {

fs::path bench_dir() {
  const auto dir = fs::temp_directory_path() / "ssgbnp_test_bench";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

BenchRow row(const std::string& inst, const std::string& form, const std::string& cuts, double root,
             long cols, double time) {
  BenchRow r;
  r.instance = inst;
  r.formulation = form;
  r.cuts = cuts;
  r.init_cols = 5;
  r.status = "Optimal";
  r.objective = 3.5;
  r.time_s = time;
  r.nodes = cols / 2;
  r.root_lp_value = root;
  r.columns_generated = cols;
  return r;
}

}  // namespace

TEST_CASE("header is exact") {
  CHECK(std::string(kBenchHeader) ==
        "instance,formulation,cuts,init_cols,pricer_cols,delta,status,objective,time_s,nodes,root_lp_value,"
        "root_gap_pct,columns_generated,pricing_iterations");
}

TEST_CASE("variant parsing") {
  CHECK(parse_variant("d2").spec.base == Formulation::D2);
  const auto v = parse_variant("d2plus:attacker");
  CHECK(v.spec.base == Formulation::D2Plus);
  CHECK(v.spec.scope == CutScope::Attacker);
  CHECK(parse_variant("d2plusprime").spec.scope == CutScope::Both);
  CHECK_THROWS(parse_variant("d3"));
  CHECK_THROWS(parse_variant("d2plus:sideways"));
}

TEST_CASE("two instances by two variants give four sorted rows") {
  const auto dir = bench_dir();
  std::vector<fs::path> files;
  for (int s : {2, 1}) {
    const auto p = dir / instance_filename(5, 2, 2, s);
    save_instance(generate(5, 2, 2, 5, s), p);
    files.push_back(p);
  }
  BenchOptions opts;
  opts.jobs = 2;
  const auto rows = run_bench(files, {parse_variant("d2"), parse_variant("d2plus:both")}, opts);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].instance == "ssg_n5_k2_h2_s1.json");
  CHECK(rows[0].formulation == "d2");
  CHECK(rows[0].cuts == "none");
  CHECK(rows[1].formulation == "d2plus");
  CHECK(rows[1].cuts == "both");
  CHECK(rows[2].instance == "ssg_n5_k2_h2_s2.json");
  for (const auto& r : rows) {
    CHECK(r.status == "Optimal");
    CHECK(r.init_cols == 5);
    CHECK_FALSE(r.delta.has_value());
  }
  CHECK(rows[1].root_lp_value <= rows[0].root_lp_value + 1e-6);
  CHECK(rows[0].objective == doctest::Approx(rows[1].objective).epsilon(1e-9));

  // Same inputs reproduce every column except time_s.
  const auto again = run_bench(files, {parse_variant("d2"), parse_variant("d2plus:both")}, {});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto a = rows[i], b = again[i];
    a.time_s = b.time_s = 0.0;
    CHECK(render_row(a) == render_row(b));
  }
}

TEST_CASE("render and parse round-trip") {
  auto r = row("x.json", "d2plus", "both", 12.25, 40, 0.5);
  r.delta = 0.3;
  r.pricing_iterations = 17;
  r.root_gap_pct = 4.75;
  const std::string csv = std::string(kBenchHeader) + "\n" + render_row(r) + "\n" +
                          render_row(row("y.json", "d2", "none", 13, 70, 1.5)) + "\n";
  const auto parsed = parse_csv(csv);
  REQUIRE(parsed.size() == 2);
  CHECK(render_row(parsed[0]) == render_row(r));
  CHECK(parsed[0].delta == 0.3);
  CHECK_FALSE(parsed[1].delta.has_value());
  CHECK(lines(render_row(r)).size() == 1);
  CHECK_THROWS(parse_csv("instance,formulation\nx,d2\n"));
}

TEST_CASE("summary ratios and dominance") {
  std::vector<BenchRow> rows{
      row("a", "d2", "none", 10, 100, 2.0),      row("a", "d2plus", "both", 9, 60, 1.0),
      row("a", "d2plusprime", "both", 8.5, 50, 1.0), row("b", "d2", "none", 7, 100, 2.0),
      row("b", "d2plus", "both", 7, 40, 0.5),
  };
  auto s = summarize(rows);
  CHECK(s.paired_instances == 2);
  CHECK(s.column_ratio == doctest::Approx(0.5));
  CHECK(s.time_ratio == doctest::Approx(1.5 / 4.0));
  CHECK(s.mean_nodes_d2 == doctest::Approx(50));
  CHECK(s.mean_nodes_d2plus == doctest::Approx(25));
  CHECK(s.dominance_violations.empty());
  CHECK(render_summary(s).find("column ratio") != std::string::npos);

  rows[2].root_lp_value = 9.5;
  rows[4].root_lp_value = 7.1;
  s = summarize(rows);
  CHECK(s.dominance_violations.size() == 2);

  // Rows that did not finish are left out of the ratios.
  rows[3].status = "TimeLimit";
  CHECK(summarize(rows).paired_instances == 1);
}

TEST_CASE("per-row failures become error rows") {
  const auto dir = bench_dir();
  const auto good = dir / "ssg_good.json";
  save_instance(generate(4, 1, 1, 5, 3), good);
  const auto bad = dir / "ssg_bad.json";
  std::ofstream(bad) << "{ not json";
  const auto rows = run_bench({good, bad}, {parse_variant("d2")}, {});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].instance == "ssg_bad.json");
  CHECK(rows[0].status == "error");
  CHECK(rows[1].status == "Optimal");
}

TEST_CASE("verify battery") {
  const auto battery = verify_battery(8, 0);
  REQUIRE(battery.size() == 8);
  CHECK(battery[0].game.n_targets == 3);
  CHECK(battery[1].game.n_targets == 4);
  CHECK(battery[4].game.n_attackers == 2);
  const auto ok = verify(battery, all_variants());
  CHECK(ok.failures.empty());
  CHECK(ok.checked == 8 * 7);

  const auto wider = verify_battery(20, 0);
  const auto broken = verify(wider, {FormulationSpec{Formulation::D2Plus}}, 2.5);
  REQUIRE_FALSE(broken.failures.empty());
  CHECK(broken.failures[0].rfind("ssg_n", 0) == 0);
  CHECK(broken.failures[0].find(".json [d2plus:both]: engine") != std::string::npos);

  const auto empty = verify({}, all_variants());
  CHECK(empty.checked == 0);
  CHECK(empty.failures.empty());
}

TEST_CASE("report JSON carries every field") {
  const auto g = generate(5, 2, 3, 5, 4);
  const auto r = solve(g, {Formulation::D2Plus});
  const auto j = nlohmann::json::parse(report_json(r.report));
  for (const char* key : {"status", "objective", "time_s", "nodes", "root_lp_value", "root_gap_pct",
                          "columns_generated", "pricing_iterations", "formulation", "cuts"}) {
    CHECK_MESSAGE(j.contains(key), key);
  }
  CHECK(j["status"] == "Optimal");
  const auto s = nlohmann::json::parse(strategy_json(r.strategy));
  CHECK(s.contains("support"));
}
