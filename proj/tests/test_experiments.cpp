#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "haar/error.hpp"
#include "haar/experiments.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace haar;
using doctest::Approx;

TEST_CASE("slope fits") {
  const std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(-0.5 * v + 2.0);
  const auto fit = fit_slope(x, y);
  CHECK(fit.slope == Approx(-0.5));
  CHECK(fit.intercept == Approx(2.0));
  CHECK(fit.residual < 1e-12);
  CHECK(fit.points == 5);

  y[2] += 1.0;
  CHECK(fit_slope(x, y).residual > 0.1);
  CHECK_THROWS_AS(fit_slope({0, 1, 2}, {0, 1, 2}), DomainError);
  CHECK_THROWS_AS(fit_slope({1, 1, 1, 1}, {0, 1, 2, 3}), DomainError);
  CHECK_THROWS_AS(fit_slope({0, 1, 2, 3}, {0, 1, kInf, 3}), DomainError);
}

TEST_CASE("configuration validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.N_max = cfg.J - 2;
  CHECK_THROWS_AS(cfg.validate(), ResolutionError);
  cfg = {};
  cfg.N_min = 5;
  cfg.N_max = 4;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.corpus_size = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.box = Box::cube(2, 0, 1);
  CHECK_THROWS_AS(cfg.validate(), StructuralError);
}

TEST_CASE("table writers") {
  ResultTable t;
  t.columns = {"N", "value"};
  t.add({1, 0.1});
  t.add({2, kInf});
  CHECK(t.column("value")[0] == 0.1);
  CHECK_THROWS_AS(t.column("missing"), Error);
  CHECK_THROWS_AS(t.add({1.0}), Error);

  std::ostringstream csv;
  write_csv(csv, t);
  CHECK(csv.str() == "N,value\n1,0.1\n2,inf\n");

  std::ostringstream js;
  write_json(js, t);
  const auto parsed = nlohmann::json::parse(js.str());
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0]["value"].get<double>() == 0.1);
  CHECK(parsed[1]["value"].get<std::string>() == "inf");
}

TEST_CASE("results go to a file with a manifest beside it") {
  const auto dir = std::filesystem::temp_directory_path() / "haar_test_experiments";
  std::filesystem::create_directories(dir);
  ExperimentConfig cfg;
  cfg.output_path = (dir / "out.csv").string();
  ResultTable t;
  t.columns = {"a"};
  t.add({3});
  const Manifest m = config_manifest("unit", cfg);
  std::ostringstream unused;
  write_result(cfg, t, m, unused);
  CHECK(unused.str().empty());
  std::ifstream in(cfg.output_path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str() == "a\n3\n");
  std::ifstream mf(cfg.output_path + ".manifest.json");
  const auto manifest = nlohmann::json::parse(mf);
  CHECK(manifest["experiment"] == "unit");
  CHECK(manifest.contains("seed"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("bump corpus is seeded and supported in the unit cube") {
  const Box box = Box::cube(1, -1, 2);
  CorpusSpec spec;
  const auto a = bump_corpus(1, 9, box, 6, 42, spec);
  const auto b = bump_corpus(1, 9, box, 6, 42, spec);
  const auto c = bump_corpus(1, 9, box, 6, 43, spec);
  REQUIRE(a.size() == 6);
  double differ = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(oracle::max_abs_diff(a[i], b[i]) == 0.0);
    differ = std::max(differ, oracle::max_abs_diff(a[i], c[i]));
    CHECK(lp_quasinorm(a[i], 2.0) > 0.0);
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      const double x = a[i].center(k)[0];
      if (x < 0.0 || x > 1.0) CHECK(a[i][k] == 0.0);
    }
  }
  CHECK(differ > 0.0);
}

TEST_CASE("blow-up witness") {
  const auto f = blowup_witness(1, 6);
  CHECK(f.box() == Box::cube(1, -3, 3));
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double x = f.center(c)[0];
    if (std::fabs(x) <= 2.0) CHECK(f[c] == Approx(x));
    if (std::fabs(x) >= 2.5) CHECK(f[c] == 0.0);
  }
}

TEST_CASE("blow-up run is deterministic and reports its fit") {
  ExperimentConfig cfg;
  cfg.J = 8;
  cfg.N_min = 1;
  cfg.N_max = 5;
  cfg.params = NormParams{1.05, 0.9, 1.0, 1.0};
  const auto a = run_blowup(cfg);
  const auto b = run_blowup(cfg);
  CHECK(a.table.rows == b.table.rows);
  CHECK(a.table.rows.size() == 5);
  CHECK(a.expected_slope == Approx(0.05));
  CHECK(a.fit.points == 5);
  CHECK(std::isfinite(a.fit.slope));
}

TEST_CASE("convergence reaches exact reconstruction") {
  for (std::size_t d : {1u, 2u}) {
    ExperimentConfig cfg;
    cfg.d = d;
    cfg.J = d == 1 ? 6 : 4;
    cfg.N_max = cfg.J - 3;
    cfg.corpus_size = 2;
    cfg.params = NormParams{0.3, 2.0, 2.0, 2.0};
    const auto r = run_convergence(cfg);
    CHECK(r.final_error <= 1e-9);
    const auto again = run_convergence(cfg);
    CHECK(again.table.rows == r.table.rows);
    const auto levels = r.table.column("level");
    CHECK(levels.front() <= levels.back());
  }
}

TEST_CASE("uniformity run produces one row per N") {
  ExperimentConfig cfg;
  cfg.J = 8;
  cfg.N_max = 4;
  cfg.corpus_size = 3;
  cfg.params = NormParams{0.3, 2.0, 2.0, 2.0};
  CorpusSpec spec;
  spec.u_max = 4.0;
  const auto r = run_uniformity(cfg, spec);
  CHECK(r.table.rows.size() == 5);
  for (double v : r.table.column("ratio_E")) {
    CHECK(v > 0.0);
    CHECK(std::isfinite(v));
  }
  CHECK(std::isfinite(r.fit_expectation.slope));
  CHECK(std::isfinite(r.fit_sign.slope));
}

TEST_CASE("envelope run covers all four cases") {
  ExperimentConfig cfg;
  cfg.J = 10;
  cfg.params = NormParams{0.0, 1.5, 2.0, 2.0};
  const auto r = run_lken_lj(cfg, 16);
  CHECK(r.table.rows.size() == 16);
  int seen[5] = {0, 0, 0, 0, 0};
  for (double c : r.table.column("case")) ++seen[static_cast<int>(c)];
  for (int c = 1; c <= 4; ++c) CHECK(seen[c] > 0);
  CHECK(r.support_leak <= 1e-10);
  CHECK(std::isfinite(r.max_gap));
}
