#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ifobench/certificate.hpp"
#include "ifobench/complexity.hpp"
#include "ifobench/rates.hpp"
#include "ifobench/solvers.hpp"

namespace ifobench {

// One experiment = one instance + a list of solver runs. Kinds:
//
//   hard-static   solvers against the fixed worst-case separable instance
//   resist-single solvers against the single-function adaptive adversary
//   resist-ifo    solvers against the n-component adaptive adversary
//   rls           solvers + complexity report on a sphere least-squares set
//   bounds-table  rate/call-count calculators only (no solvers needed)
//
// All randomness is seeded; identical configs produce byte-identical outputs
// except for the wall-clock column.
struct ExperimentConfig {
  std::string kind;

  // instance
  int n = 1;
  double mu = 1.0;
  double L = 0.0;  // resolved from kappa at parse time when kappa is given
  double gamma = 1.0;
  int component_dim = 0;  // hard-static, resist-ifo
  int dim = 0;            // resist-single
  int d = 0;              // rls
  double R = 1.0;
  double noise = 0.0;
  std::uint64_t data_seed = 0;
  std::string convention = "half";  // rls loss convention

  // concentration-check constants (rls)
  double delta = 0.01;
  double conc_c = 1.0;
  double conc_C = 1.0;

  std::vector<SolverConfig> solvers;
  long long budget = 0;  // default per-solver budget
  double eps = 1e-6;     // bounds-table target accuracy
  std::string output_dir = "out";
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;  // all validation problems, with field paths
};

// Parses and fully validates a JSON config; either a config with defaults
// applied or the complete list of validation errors, never a partial config.
ParseResult parse_config(const std::string& text);

std::string config_to_json(const ExperimentConfig& cfg, int indent = 2);

struct RunSummary {
  std::string algo;
  std::uint64_t seed = 0;
  long long budget = 0;
  long long calls = 0;
  double final_rel_error = 0.0;
  double slope_loglog = 0.0;
  std::string trace_csv;
  std::string error;  // non-empty when the run failed (e.g. adversary capacity)
};

struct ExperimentReport {
  ExperimentConfig config;
  RateReport rate;
  std::vector<RunSummary> runs;
  std::vector<Certificate> certificates;
  bool has_complexity = false;
  SpectrumReport spectrum{};
  ComplexityReport complexity;
  ConcentrationReport concentration{};
  bool has_bounds = false;
  CallBounds bounds{};
  bool rollup_pass = true;
  std::vector<std::string> notes;
  std::string output_dir;
};

// Runs the experiment, writing traces, certificates, datasets and
// report.json under the output directory (IFOBENCH_OUT overrides the
// configured one). Solver runs execute in parallel; outputs are written in
// solver order.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::string report_to_json(const ExperimentReport& rep, int indent = 2);

}  // namespace ifobench
