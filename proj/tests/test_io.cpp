#include "coadapt/io.hpp"

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <limits>

using namespace coadapt;
using io::json;

TEST_CASE("doubles round-trip in shortest form") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1e-300) == "1e-300");
  CHECK(io::format_double(3.0) == "3");
  Rng rng = make_stream(31, 0);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::ldexp(uniform01(rng) - 0.5, static_cast<int>(rng() % 200) - 100);
    CHECK(io::parse_double(io::format_double(x)) == x);
  }
  CHECK(io::parse_double(io::format_double(std::numeric_limits<double>::infinity())) ==
        std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(io::parse_double("1.5x"), UsageError);
  CHECK_THROWS_AS(io::parse_double(""), UsageError);
}

TEST_CASE("csv splitting") {
  const auto rows = io::parse_csv("a,b\r\n1,2\n\n3,\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"a", "b"});
  CHECK(rows[2] == std::vector<std::string>{"3", ""});
}

TEST_CASE("survival files round-trip") {
  const std::vector<double> grid{0.0, 0.1, 1.0 / 3, 2.0};
  const SurvivalCurve c = estimate_survival(StrategyId::Optimal, 3, 4, grid, 1000, 5);
  const std::string csv = io::survival_csv(c);
  CHECK(csv.rfind("t,value,half_width_95,half_width_3sigma,replicates\n", 0) == 0);
  const SurvivalCurve back = io::parse_survival_csv(csv);
  CHECK(io::survival_csv(back) == csv);
  CHECK(back.value == c.value);
  CHECK(back.kind == CurveKind::Empirical);
  const json j = io::survival_json(c);
  CHECK(io::survival_json(io::survival_from_json(json::parse(j.dump()))) == j);
  CHECK_THROWS_AS(io::parse_survival_csv("t,value\n0,1\n"), UsageError);
  CHECK_THROWS_AS(io::parse_survival_csv("t,value,half_width_95,half_width_3sigma,replicates\n0,1,0\n"), UsageError);
}

TEST_CASE("tail tables round-trip") {
  const std::vector<double> grid{0.5, 1.0, 2.5};
  const TailTable tab = survival_exact(4, 6, grid);
  const io::TailGrid g = io::tail_grid(tab, 2);
  CHECK(g.levels == std::vector<int>{2, 3, 4, 5, 6});
  const std::string csv = io::tail_table_csv(g);
  CHECK(csv.rfind("m,0.5,1,2.5\n", 0) == 0);
  const io::TailGrid back = io::parse_tail_table_csv(csv);
  CHECK(io::tail_table_csv(back) == csv);
  CHECK(back.values[0][1] == tab.v(2, 1));
  const json j = io::tail_table_json(tab, 1);
  CHECK(j["rows"].size() == 6);
  CHECK(j["method"] == "uniformization");
  CHECK(j["max_error"].get<double>() <= 1e-12);
  CHECK_THROWS_AS(io::parse_tail_table_csv("x,1\n"), UsageError);
  CHECK_THROWS_AS(io::parse_tail_table_csv("m,1,2\n3,0.5\n"), UsageError);
}

TEST_CASE("cutoff and limit tables round-trip") {
  const double thetas[] = {-1.0, 0.0, 1.0};
  const auto pts = cutoff_profile(5, 1000, thetas);
  const std::string csv = io::cutoff_csv(pts);
  CHECK(csv.rfind("theta,T_d,t,tv_exact,tv_asymptotic\n", 0) == 0);
  CHECK(io::cutoff_csv(io::parse_cutoff_csv(csv)) == csv);
  CHECK(io::cutoff_json(pts).size() == 3);

  const std::vector<double> grid{0.0, 0.5, 1.0, 4.0};
  const int ds[] = {10, 100};
  const auto rows = dinfty_convergence(3, ds, grid);
  const std::string dcsv = io::dinfty_csv(rows);
  CHECK(dcsv.rfind("d,sup_gap,t_at_sup\n", 0) == 0);
  CHECK(io::dinfty_csv(io::parse_dinfty_csv(dcsv)) == dcsv);
  CHECK(io::tv_csv({0.0, 1.0}, {0.5, 0.25}) == "t,tv_exact\n0,0.5\n1,0.25\n");
}

TEST_CASE("report documents") {
  VerifyOptions o;
  o.d = 4;
  o.m_max = 3;
  o.t_grid = {0.5, 1.0};
  o.samples_per_cell = 4;
  o.dominance_replicates = 200;
  const json v = io::verify_json(verify(o));
  CHECK(v["summary"]["match"] == 6);
  CHECK(v["cells"].size() == 6);
  CHECK(v["cells"][0]["status"] == "match");
  CHECK(v["dominance"].size() == 6);

  const json mt = io::mean_tau_json(mean_tau_stationary(2, 2));
  CHECK(mt["exact"] == "3/8");
  CHECK(mt["ratio_to_log_n"].is_number());
  CHECK(io::mean_tau_json(mean_tau_stationary(2, 1))["ratio_to_log_n"].is_null());

  const json mr = io::marginal_json(validate_marginals(StrategyId::Synchronous, WalkParams(3, 2), 1.0, 200, 1));
  CHECK(mr["strategy"] == "synchronous");
  CHECK(mr["tests"].size() == 8);

  const json rd = io::rdiff_json(r_diff_table(4, 4, std::vector<double>{1.0}));
  CHECK(rd["diff"][1]["cells"][0]["sign"] == "zero");

  const json meta = io::run_metadata("exact", json{{"d", 2}});
  CHECK(meta["command"] == "exact");
  CHECK(meta["parameters"]["d"] == 2);
  CHECK(meta.contains("timestamp"));
  CHECK(meta.contains("version"));
  CHECK(meta.contains("simd"));
}

TEST_CASE("text files") {
  const std::string path = "coadapt_io_test.tmp";
  io::write_text(path, "a,b\n1,2\n");
  CHECK(io::read_text(path) == "a,b\n1,2\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(io::read_text("/nonexistent/dir/file"), UsageError);
  CHECK_THROWS_AS(io::write_text("/nonexistent/dir/file", "x"), UsageError);
}
