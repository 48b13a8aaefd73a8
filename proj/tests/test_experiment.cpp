#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ifobench/experiment.hpp"

using namespace ifobench;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("ifobench_test_" + tag);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("minimal config gets defaults applied") {
  const ParseResult r = parse_config(R"({"kind":"bounds-table","instance":{"n":4,"kappa":10}})");
  REQUIRE(r.config);
  CHECK(r.errors.empty());
  CHECK(r.config->kind == "bounds-table");
  CHECK(r.config->n == 4);
  CHECK(r.config->L == doctest::Approx(10.0));
  CHECK(r.config->gamma == 1.0);
  CHECK(r.config->eps == 1e-6);
  CHECK(r.config->output_dir == "out");
  CHECK(r.config->solvers.empty());

  // the echo carries the applied defaults
  const std::string echo = config_to_json(*r.config);
  CHECK(echo.find("\"output_dir\": \"out\"") != std::string::npos);
}

TEST_CASE("validation collects every problem with its path") {
  const ParseResult r = parse_config(R"({
    "kind": "hard-static",
    "instance": {"n": 4, "mu": 1.0, "L": 3.0, "kappa": 7.0, "component_dim": 32},
    "budget": 0,
    "solvers": [{"name": "warp"}]
  })");
  CHECK_FALSE(r.config);
  bool saw_kappa = false, saw_budget = false, saw_solver = false;
  for (const std::string& e : r.errors) {
    if (e.find("instance.kappa") != std::string::npos && e.find("instance.L") != std::string::npos) saw_kappa = true;
    if (e.find("budget") != std::string::npos) saw_budget = true;
    if (e.find("solvers[0].name") != std::string::npos) saw_solver = true;
  }
  CHECK(saw_kappa);
  CHECK(saw_budget);
  CHECK(saw_solver);
}

TEST_CASE("malformed json is reported, not thrown") {
  const ParseResult r = parse_config("{nope");
  CHECK_FALSE(r.config);
  REQUIRE_FALSE(r.errors.empty());
  CHECK(r.errors.front().find("invalid JSON") != std::string::npos);
}

TEST_CASE("hard-static experiment writes consistent traces") {
  const fs::path dir = temp_dir("static");
  ExperimentConfig cfg;
  cfg.kind = "hard-static";
  cfg.n = 4;
  cfg.mu = 1.0;
  cfg.L = 9.0;
  cfg.gamma = 1.0;
  cfg.component_dim = 48;
  cfg.budget = 200;
  cfg.output_dir = dir.string();
  SolverConfig gd;
  gd.name = "gd";
  gd.budget = 200;
  cfg.solvers.push_back(gd);

  const ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.rollup_pass);
  REQUIRE(rep.runs.size() == 1);
  CHECK(rep.runs[0].error.empty());

  const auto rows = parse_csv(slurp(dir / rep.runs[0].trace_csv));
  REQUIRE(rows.size() > 2);
  CHECK(rows[0] == std::vector<std::string>{"algo", "seed", "k_calls", "rel_error", "obj", "lower_bound",
                                            "log_lower_bound", "wall_ns"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const long long k = std::stoll(rows[i][2]);
    const BoundValue expect = lower_bound_curve(cfg.gamma, cfg.L / cfg.mu, cfg.n, k);
    CHECK(std::stod(rows[i][5]) == doctest::Approx(expect.value).epsilon(1e-12));
    CHECK(std::stod(rows[i][6]) == doctest::Approx(expect.log_value).epsilon(1e-12));
    // measured error never beats the adversarial curve
    CHECK(std::stod(rows[i][3]) * cfg.gamma >= expect.value - 1e-9);
  }
  CHECK(fs::exists(dir / "report.json"));
  fs::remove_all(dir);
}

TEST_CASE("identical configs produce identical bytes modulo wall clock") {
  ExperimentConfig cfg;
  cfg.kind = "hard-static";
  cfg.n = 3;
  cfg.mu = 1.0;
  cfg.L = 7.0;
  cfg.gamma = 1.0;
  cfg.component_dim = 40;
  cfg.budget = 150;
  SolverConfig sag;
  sag.name = "sag";
  sag.budget = 150;
  sag.seed = 11;
  cfg.solvers.push_back(sag);

  const fs::path dir_a = temp_dir("repro_a");
  const fs::path dir_b = temp_dir("repro_b");
  cfg.output_dir = dir_a.string();
  const ExperimentReport rep_a = run_experiment(cfg);
  cfg.output_dir = dir_b.string();
  const ExperimentReport rep_b = run_experiment(cfg);

  const auto rows_a = parse_csv(slurp(dir_a / rep_a.runs[0].trace_csv));
  const auto rows_b = parse_csv(slurp(dir_b / rep_b.runs[0].trace_csv));
  REQUIRE(rows_a.size() == rows_b.size());
  for (std::size_t i = 0; i < rows_a.size(); ++i) {
    REQUIRE(rows_a[i].size() == 8);
    for (std::size_t c = 0; c < 8; ++c) {
      if (c == 7 && i > 0) continue;  // wall_ns column may differ
      CHECK(rows_a[i][c] == rows_b[i][c]);
    }
  }
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("certification experiment end to end") {
  const fs::path dir = temp_dir("certify");
  ExperimentConfig cfg;
  cfg.kind = "resist-ifo";
  cfg.n = 2;
  cfg.mu = 1.0;
  cfg.L = 11.0;
  cfg.gamma = 1.0;
  cfg.component_dim = 128;
  cfg.budget = 60;
  cfg.output_dir = dir.string();
  for (const std::string name : {"gd", "cg", "sgd"}) {
    SolverConfig s;
    s.name = name;
    s.budget = 60;
    s.seed = 21;
    cfg.solvers.push_back(s);
  }

  const ExperimentReport rep = run_experiment(cfg);
  REQUIRE(rep.certificates.size() == 3);
  for (const Certificate& c : rep.certificates) {
    if (c.algo == "sgd") {
      CHECK(c.status == CertStatus::kNotAssertedRandomized);
    } else {
      CHECK(c.status == CertStatus::kAsserted);
      CHECK(c.pass);
      CHECK(c.replay_verified);
      CHECK(c.max_answer_defect <= 1e-9);
    }
    CHECK(fs::exists(dir / ("cert_0" + std::to_string(&c - rep.certificates.data()) + "_" + c.algo + ".json")));
  }
  CHECK(rep.rollup_pass);

  // the stored report parses back and carries the rollup
  const std::string report = slurp(dir / "report.json");
  CHECK(report.find("\"rollup_pass\": true") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("single-oracle certification experiment") {
  const fs::path dir = temp_dir("single");
  ExperimentConfig cfg;
  cfg.kind = "resist-single";
  cfg.n = 1;
  cfg.mu = 1.0;
  cfg.L = 36.0;
  cfg.gamma = 1.0;
  cfg.dim = 160;
  cfg.budget = 20;
  cfg.output_dir = dir.string();
  SolverConfig agm;
  agm.name = "agm";
  agm.budget = 20;
  cfg.solvers.push_back(agm);

  const ExperimentReport rep = run_experiment(cfg);
  REQUIRE(rep.certificates.size() == 1);
  CHECK(rep.certificates[0].kind == "resist-single");
  CHECK(rep.certificates[0].pass);
  CHECK(rep.certificates[0].replay_verified);
  CHECK(rep.rollup_pass);
  CHECK(fs::exists(dir / "transcript_00_agm.csv"));
  fs::remove_all(dir);
}

TEST_CASE("rls experiment reports spectrum and regimes") {
  const fs::path dir = temp_dir("rls");
  ExperimentConfig cfg;
  cfg.kind = "rls";
  cfg.n = 200;
  cfg.d = 10;
  cfg.mu = 0.05;
  cfg.R = 1.0;
  cfg.L = cfg.mu + 1.0;
  cfg.noise = 0.1;
  cfg.data_seed = 5;
  cfg.budget = 4000;
  cfg.output_dir = dir.string();
  SolverConfig sag;
  sag.name = "sag";
  sag.budget = 4000;
  cfg.solvers.push_back(sag);

  const ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.has_complexity);
  CHECK(rep.spectrum.mu_f >= cfg.mu - 1e-12);
  CHECK(rep.spectrum.L_f <= cfg.mu + 1.0 + 1e-12);
  CHECK(rep.complexity.gamma_agm == doctest::Approx(std::sqrt(rep.spectrum.kappa_f)).epsilon(1e-12));
  CHECK(fs::exists(dir / "dataset.csv"));
  CHECK(fs::exists(dir / "dataset.json"));
  CHECK(fs::exists(dir / "regimes.txt"));
  fs::remove_all(dir);
}

TEST_CASE("bounds-table runs without solvers") {
  const fs::path dir = temp_dir("bounds");
  ExperimentConfig cfg;
  cfg.kind = "bounds-table";
  cfg.n = 8;
  cfg.mu = 1.0;
  cfg.L = 101.0;
  cfg.eps = 1e-6;
  cfg.output_dir = dir.string();
  const ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.has_bounds);
  CHECK(rep.bounds.K_exact >= 8);
  CHECK(rep.rollup_pass);
  fs::remove_all(dir);
}

TEST_CASE("environment variable overrides the output directory") {
  const fs::path dir = temp_dir("envdir");
  setenv("IFOBENCH_OUT", dir.string().c_str(), 1);
  ExperimentConfig cfg;
  cfg.kind = "bounds-table";
  cfg.n = 2;
  cfg.mu = 1.0;
  cfg.L = 5.0;
  cfg.output_dir = "somewhere_else";
  const ExperimentReport rep = run_experiment(cfg);
  unsetenv("IFOBENCH_OUT");
  CHECK(rep.output_dir == dir.string());
  CHECK(fs::exists(dir / "report.json"));
  fs::remove_all(dir);
}
