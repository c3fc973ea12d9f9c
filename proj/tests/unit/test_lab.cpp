#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lab/config.hpp"
#include "lab/experiments.hpp"
#include "lab/plot.hpp"
#include "lab/report.hpp"

using namespace lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("nodal_lab_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_e1(const fs::path& out) {
  auto c = default_config("E1");
  c.seed = 1;
  c.out = out;
  set_param(c, "corpus_size=20");
  set_param(c, "max_degree=10");
  set_param(c, "combinatorial_max_n=8");
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config("experiment = \"E3\"\nseed = 7\n[params]\nN = [16, 32]\n");
  CHECK(c.experiment == "E3");
  CHECK(c.seed == 7);
  CHECK(c.get_ints("N") == std::vector<int>{16, 32});
  CHECK(c.get_int("probes") == 2000);

  auto expect_usage = [](const std::string& text, const std::string& key) {
    try {
      parse_config(text);
      FAIL("no error for " << text);
    } catch (const UsageError& e) {
      CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
  };
  expect_usage("experiment = \"E3\"\nbogus = 1\n", "bogus");
  expect_usage("experiment = \"E3\"\n[params]\nprobes = \"many\"\n", "probes");
  expect_usage("experiment = \"E3\"\n[params]\nnot_a_param = 3\n", "not_a_param");
  expect_usage("experiment = \"E9\"\n", "E9");
  expect_usage("experiment = \"E1\"\nseed = = 3\n", "");

  auto d = default_config("extremal-sweep");
  CHECK(d.experiment == "E3");
  CHECK_THROWS_AS(set_param(d, "probes"), UsageError);
  CHECK_THROWS_AS(set_param(d, "nope=1"), UsageError);
  d.budget_scale = 0.5;
  CHECK(d.scaled(100) == 50);
  CHECK(d.scaled(1, 4) == 4);
}

TEST_CASE("report tables and csv") {
  ExperimentReport r;
  r.experiment = "E0";
  auto& t = r.add_table("t", "direct", {"a", "b"});
  t.add({1, 0.5});
  t.add({2, "x"});
  CHECK(to_csv(t) == "a,b\n1,0.5\n2,x\n");
  CHECK(r.table("t").numbers("a") == std::vector<double>{1.0, 2.0});
  CHECK_THROWS_AS(r.table("missing"), UsageError);
  r.check(3, "ok", true, "");
  CHECK(r.passed());
  r.check(3, "bad", false, "");
  CHECK_FALSE(r.passed());

  const auto back = report_from_json(to_json(r));
  CHECK(back.tables.size() == 1);
  CHECK(back.checks.size() == 2);
  CHECK(to_csv(back.tables[0]) == to_csv(t));
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("E3 smoke run writes the fixed header") {
  const auto out = scratch("e3");
  auto c = default_config("E3");
  c.out = out;
  set_param(c, "N=[16, 32]");
  set_param(c, "area_budget=4000");
  set_param(c, "mc_budget=20000");
  set_param(c, "probes=100");
  set_param(c, "c4_grid=12");
  const auto r = run_experiment(c);
  const auto csv = slurp(out / "e3_sweep.csv");
  CHECK(csv.substr(0, csv.find('\n')) == kExtremalCsvHeader);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "constructions" / "P_16.json"));
  CHECK(read_report(out).tables.size() == r.tables.size());
}

TEST_CASE("E1 is deterministic and its plot matches the golden file") {
  const auto a = scratch("e1a"), b = scratch("e1b");
  run_experiment(small_e1(a));
  run_experiment(small_e1(b));
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().filename() == "timing.json") continue;
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
  }
  const auto files = plot_report(read_report(a), a / "plots");
  REQUIRE(files.size() == 1);
  CHECK(slurp(files[0]) == slurp(fs::path(NODAL_GOLDEN_DIR) / "e1_gelfond_small.svg"));
}

TEST_CASE("plots of empty reports") {
  SvgPlot empty;
  empty.title = "nothing";
  const auto svg = empty.render();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  ExperimentReport r;
  r.experiment = "E1";
  CHECK_THROWS_AS(report_plots(r), UsageError);
  r.experiment = "E42";
  CHECK_THROWS_AS(report_plots(r), UsageError);
}

TEST_CASE("experiment registry") {
  CHECK(experiments().size() == 7);
  CHECK(find_experiment("e5").id == "E5");
  CHECK(find_experiment("nadirashvili-sweep").id == "E6");
  CHECK_THROWS_AS(find_experiment("E8"), UsageError);
}
