#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "ifobench/ifo.hpp"
#include "ifobench/vec.hpp"

namespace ifobench {

// Per-run solver configuration. Step sizes default to the usual literature
// conventions when unset: GD and AGM 1/L (AGM against the effective
// constants when supplied), SGD min(1/L, 2/(mu (k + k0))), SAG 1/(16 L),
// SVRG 1/(10 L) with epoch m = 2n + ceil(kappa), SAGA 1/(3 L).
struct SolverConfig {
  std::string name;
  long long budget = 0;  // maximum IFO calls
  std::optional<double> step;
  std::optional<long long> epoch;  // SVRG inner-loop length
  std::uint64_t seed = 0;
  std::optional<double> mu_eff;  // AGM effective strong convexity
  std::optional<double> L_eff;   // AGM effective smoothness
};

struct TraceSample {
  long long k_calls;
  double rel_error;  // NaN when no error hook was supplied
  double objective;  // NaN when no objective hook was supplied
  long long wall_ns;
  Point iterate;  // retained only when TraceHooks::keep_iterates
};

// Measurement record of one solver run. IFO call counts are strictly
// increasing across samples.
struct RunTrace {
  std::string algo;
  std::uint64_t seed = 0;
  std::vector<TraceSample> samples;
  Point final_iterate;
  long long total_calls = 0;
};

// Out-of-band evaluation hooks. These never touch the oracle and never
// count as IFO calls.
struct TraceHooks {
  std::function<double(const Point&)> rel_error;
  std::function<double(const Point&)> objective;
  bool keep_iterates = false;
  long long sample_every = 0;  // 0: automatic (~256 samples per run)
};

RunTrace run_gd(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks = {});
RunTrace run_agm(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks = {});
// Conjugate gradient on the quadratic objective, driven purely by gradient
// differences; throws UnsupportedObjectiveError when the gradient linearity
// probe fails.
RunTrace run_cg(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks = {});
RunTrace run_sgd(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks = {});
RunTrace run_sag(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks = {});
RunTrace run_svrg(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks = {});
RunTrace run_saga(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks = {});

bool solver_exists(const std::string& name);
// GD, AGM and CG are deterministic; SGD, SAG, SVRG and SAGA are randomized
// (seeded).
bool solver_deterministic(const std::string& name);
const std::vector<std::string>& solver_names();

// Dispatch by cfg.name.
RunTrace run_solver(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks = {});

// Fills rel_error on retained-iterate samples, for runs whose minimizer is
// only known after finalization.
void backfill_rel_errors(RunTrace& trace, const Point& xstar, double gamma);

// Least-squares slope of ln(rel_error) against ln(k_calls): flat (near 0)
// for sublinear methods, steep for linearly convergent ones over short
// ranges.
double loglog_slope(const RunTrace& trace);
// Least-squares slope of ln(rel_error) against k_calls: strictly negative
// and bounded away from zero under linear convergence.
double semilog_slope(const RunTrace& trace);

// CSV columns: algo,seed,k_calls,rel_error,obj,lower_bound,log_lower_bound,wall_ns.
// ln_bound(K) supplies the theoretical curve; pass an empty function to emit
// nan columns.
void write_trace_csv(const RunTrace& trace, std::ostream& out,
                     const std::function<double(long long)>& ln_bound = {});

}  // namespace ifobench
