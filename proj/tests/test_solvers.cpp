#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ifobench/complexity.hpp"
#include "ifobench/errors.hpp"
#include "ifobench/least_squares.hpp"
#include "ifobench/rates.hpp"
#include "ifobench/resisting.hpp"
#include "ifobench/solvers.hpp"

using namespace ifobench;

namespace {

// f(x) = mu/2 ||x||^2 + (1/n) sum (L-mu)/2 ||x - c_i||^2, a well-conditioned
// synthetic finite sum with a closed-form minimizer.
FiniteSumProblem shifted_quadratic(int n, double mu, double L, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> centers;
  Point mean = zeros(dim);
  for (int i = 0; i < n; ++i) {
    centers.push_back(rng.normal_vector(dim));
    axpy(1.0 / n, centers.back(), mean);
  }
  std::vector<Component> comps;
  for (int i = 0; i < n; ++i) {
    const Point c = centers[static_cast<std::size_t>(i)];
    const double s = L - mu;
    comps.push_back([c, s](const Point& x) -> ComponentEval {
      const Point r = sub(x, c);
      return {0.5 * s * norm2(r), scaled(r, s)};
    });
  }
  FiniteSumProblem prob(n, mu, L, dim, std::move(comps));
  prob.set_minimizer(scaled(mean, (L - mu) / L));
  return prob;
}

TraceHooks error_hooks(const FiniteSumProblem& prob) {
  TraceHooks hooks;
  const Point xstar = *prob.minimizer();
  const double gamma = prob.gamma();
  hooks.rel_error = [xstar, gamma](const Point& x) { return norm(sub(x, xstar)) / gamma; };
  return hooks;
}

}  // namespace

TEST_CASE("budgets below one iteration return the start point") {
  const FiniteSumProblem prob = shifted_quadratic(5, 1.0, 4.0, 8, 3);
  StaticIfo oracle(prob);
  SolverConfig cfg;
  cfg.name = "gd";
  cfg.budget = 4;  // less than n
  const RunTrace trace = run_gd(cfg, oracle);
  CHECK(trace.total_calls == 0);
  CHECK(trace.final_iterate == zeros(8));
}

TEST_CASE("gradient descent converges geometrically") {
  const FiniteSumProblem prob = shifted_quadratic(4, 1.0, 3.0, 6, 5);
  StaticIfo oracle(prob);
  SolverConfig cfg;
  cfg.name = "gd";
  cfg.budget = 400;
  const RunTrace trace = run_gd(cfg, oracle, error_hooks(prob));
  CHECK(trace.total_calls == 400);
  CHECK(trace.samples.back().rel_error < 1e-10);
  // linear convergence detector: strictly negative slope in the semilog plot
  CHECK(semilog_slope(trace) < -1e-3);
}

TEST_CASE("gradient descent contracts by exactly |1 - eta H| on spherical quadratics") {
  // shifted_quadratic has hessian L * I, so each iterate's error shrinks by
  // the same scalar factor
  const double L = 3.0;
  const FiniteSumProblem prob = shifted_quadratic(2, 1.0, L, 5, 15);
  StaticIfo oracle(prob);
  SolverConfig cfg;
  cfg.name = "gd";
  cfg.budget = 40;
  cfg.step = 0.3 / L;
  TraceHooks hooks = error_hooks(prob);
  hooks.sample_every = prob.n();
  const RunTrace trace = run_gd(cfg, oracle, hooks);
  const double factor = std::abs(1.0 - *cfg.step * L);
  for (std::size_t i = 2; i < trace.samples.size(); ++i) {
    const double ratio = trace.samples[i].rel_error / trace.samples[i - 1].rel_error;
    CHECK(ratio == doctest::Approx(factor).epsilon(1e-9));
  }
}

TEST_CASE("call accounting matches the transcript") {
  const FiniteSumProblem prob = shifted_quadratic(3, 1.0, 5.0, 7, 6);
  for (const std::string name : {"gd", "agm", "cg", "sgd", "sag", "svrg", "saga"}) {
    StaticIfo oracle(prob);
    SolverConfig cfg;
    cfg.name = name;
    cfg.budget = 50;
    cfg.seed = 7;
    const RunTrace trace = run_solver(cfg, oracle);
    CHECK(trace.total_calls == oracle.transcript().total_calls());
    CHECK(trace.total_calls <= cfg.budget);
    long long prev = -1;
    for (const TraceSample& s : trace.samples) {
      CHECK(s.k_calls > prev);
      prev = s.k_calls;
    }
  }
}

TEST_CASE("momentum with unit effective condition number is plain descent") {
  const FiniteSumProblem prob = shifted_quadratic(4, 1.0, 6.0, 9, 8);
  SolverConfig agm_cfg;
  agm_cfg.name = "agm";
  agm_cfg.budget = 120;
  agm_cfg.mu_eff = prob.L();
  agm_cfg.L_eff = prob.L();
  StaticIfo a(prob);
  const RunTrace agm_trace = run_agm(agm_cfg, a);

  SolverConfig gd_cfg;
  gd_cfg.name = "gd";
  gd_cfg.budget = 120;
  gd_cfg.step = 1.0 / prob.L();
  StaticIfo g(prob);
  const RunTrace gd_trace = run_gd(gd_cfg, g);

  CHECK(agm_trace.final_iterate == gd_trace.final_iterate);
}

TEST_CASE("momentum reaches tolerance within the expected pass count") {
  const RlsDataset data = sample_sphere_dataset(300, 25, 1.0, 0.05, 0.1, 42);
  const FiniteSumProblem prob = rls_problem(data);
  const SpectrumReport spec = empirical_spectrum(data);

  SolverConfig cfg;
  cfg.name = "agm";
  cfg.mu_eff = spec.mu_f;
  cfg.L_eff = spec.L_f;
  const double eps = 1e-6;
  const double passes_allowed = 3.0 * std::sqrt(spec.kappa_f) * std::log(1.0 / eps) + 10.0;
  cfg.budget = static_cast<long long>(passes_allowed) * prob.n();
  StaticIfo oracle(prob);
  const RunTrace trace = run_agm(cfg, oracle, error_hooks(prob));
  double best = 1.0;
  for (const TraceSample& s : trace.samples) best = std::min(best, s.rel_error);
  CHECK(best <= eps);
}

TEST_CASE("conjugate gradient solves an identity-hessian objective in one step") {
  // every component (L-mu)/2 ||x - c_i||^2 has the same spherical curvature
  const FiniteSumProblem prob = shifted_quadratic(3, 1.0, 2.0, 10, 9);
  StaticIfo oracle(prob);
  SolverConfig cfg;
  cfg.name = "cg";
  cfg.budget = 5 * prob.n();
  const RunTrace trace = run_cg(cfg, oracle, error_hooks(prob));
  // samples: start, then the first iterate already at the minimizer
  REQUIRE(trace.samples.size() >= 2);
  CHECK(trace.samples[1].rel_error <= 1e-12);
}

TEST_CASE("conjugate gradient terminates on the truncated chain quadratic") {
  const double kappa = 16.0;
  const double q = decay_rate(kappa);
  const int dim = 64;
  REQUIRE(min_dim_for_tail(q) <= dim);
  const NesterovFunction fn(1.0, kappa, rho_for_norm(1.0, q), dim);
  std::vector<Component> comps;
  comps.push_back([&fn](const Point& x) -> ComponentEval {
    const double mu = fn.mu();
    Point g = fn.gradient(x);
    axpy(-mu, x, g);
    return {fn.value(x) - 0.5 * mu * norm2(x), std::move(g)};
  });
  FiniteSumProblem prob(1, fn.mu(), fn.L(), dim, std::move(comps));
  prob.set_minimizer(fn.minimizer());

  StaticIfo oracle(prob);
  SolverConfig cfg;
  cfg.name = "cg";
  cfg.budget = 2 + 64;  // initial gradient, linearity probe, 64 iterations
  const RunTrace trace = run_cg(cfg, oracle, error_hooks(prob));
  CHECK(trace.samples.back().rel_error <= 1e-10);
}

TEST_CASE("conjugate gradient rejects non-quadratic objectives") {
  std::vector<Component> comps;
  comps.push_back([](const Point& x) -> ComponentEval {
    const double t = x[0] - 1.0;  // quartic with a nonzero gradient at the start point
    const double v = t * t * t * t + norm2(x);
    Point g = scaled(x, 2.0);
    g[0] += 4.0 * t * t * t;
    return {v, std::move(g)};
  });
  FiniteSumProblem prob(1, 1.0, 9.0, 4, std::move(comps));
  StaticIfo oracle(prob);
  SolverConfig cfg;
  cfg.name = "cg";
  cfg.budget = 40;
  CHECK_THROWS_AS(run_cg(cfg, oracle), UnsupportedObjectiveError);
}

TEST_CASE("single-component stochastic descent equals full descent") {
  const FiniteSumProblem prob = shifted_quadratic(1, 1.0, 4.0, 6, 10);
  SolverConfig sgd_cfg;
  sgd_cfg.name = "sgd";
  sgd_cfg.budget = 60;
  sgd_cfg.step = 1.0 / prob.L();
  StaticIfo s(prob);
  const RunTrace sgd_trace = run_sgd(sgd_cfg, s);

  SolverConfig gd_cfg;
  gd_cfg.name = "gd";
  gd_cfg.budget = 60;
  gd_cfg.step = 1.0 / prob.L();
  StaticIfo g(prob);
  const RunTrace gd_trace = run_gd(gd_cfg, g);
  CHECK(sgd_trace.final_iterate == gd_trace.final_iterate);
}

TEST_CASE("table methods degenerate to scaled descent for one component") {
  const FiniteSumProblem prob = shifted_quadratic(1, 1.0, 4.0, 6, 11);
  for (const std::string name : {"sag", "saga"}) {
    SolverConfig cfg;
    cfg.name = name;
    cfg.budget = 40;
    cfg.step = 0.05;
    StaticIfo oracle(prob);
    const RunTrace trace = run_solver(cfg, oracle);

    SolverConfig gd_cfg;
    gd_cfg.name = "gd";
    gd_cfg.budget = 40;
    gd_cfg.step = 0.05;
    StaticIfo g(prob);
    const RunTrace gd_trace = run_gd(gd_cfg, g);
    CHECK(trace.final_iterate == gd_trace.final_iterate);
  }

  // svrg's correction term cancels for n = 1, leaving plain descent steps;
  // the anchor passes only change the accounting
  SolverConfig svrg_cfg;
  svrg_cfg.name = "svrg";
  svrg_cfg.budget = 12;
  svrg_cfg.epoch = 5;
  svrg_cfg.step = 0.05;
  StaticIfo sv(prob);
  const RunTrace svrg_trace = run_svrg(svrg_cfg, sv);

  SolverConfig gd_cfg;
  gd_cfg.name = "gd";
  gd_cfg.budget = 10;  // two anchor calls of the twelve are bookkeeping
  gd_cfg.step = 0.05;
  StaticIfo g(prob);
  const RunTrace gd_trace = run_gd(gd_cfg, g);
  CHECK(norm(sub(svrg_trace.final_iterate, gd_trace.final_iterate)) <=
        1e-12 * std::max(1.0, norm(gd_trace.final_iterate)));
}

TEST_CASE("same seed reproduces a stochastic run bitwise") {
  const FiniteSumProblem prob = shifted_quadratic(6, 1.0, 8.0, 12, 12);
  for (const std::string name : {"sgd", "sag", "svrg", "saga"}) {
    SolverConfig cfg;
    cfg.name = name;
    cfg.budget = 90;
    cfg.seed = 77;
    StaticIfo o1(prob);
    StaticIfo o2(prob);
    const RunTrace t1 = run_solver(cfg, o1);
    const RunTrace t2 = run_solver(cfg, o2);
    CHECK(t1.final_iterate == t2.final_iterate);
    CHECK(t1.total_calls == t2.total_calls);
  }
}

TEST_CASE("variance-reduced methods hit tight tolerances on the hard instance") {
  const int n = 4;
  const double mu = 1.0, L = 8.0;
  const FiniteSumProblem prob = build_hard_instance(n, mu, L, 1.0, hard_instance_params(n, mu, L).min_dim + 16);
  const double budget = 50.0 * (n + L / mu) * std::log(1e6);
  for (const std::string name : {"sag", "svrg", "saga"}) {
    SolverConfig cfg;
    cfg.name = name;
    cfg.budget = static_cast<long long>(budget);
    cfg.seed = 5;
    StaticIfo oracle(prob);
    const RunTrace trace = run_solver(cfg, oracle, error_hooks(prob));
    double best = 1.0;
    for (const TraceSample& s : trace.samples) best = std::min(best, s.rel_error);
    CHECK(best <= 1e-6);
    CHECK(semilog_slope(trace) < -1e-5);
  }
}

TEST_CASE("stochastic descent stays above the adversarial curve shape") {
  const int n = 4;
  const FiniteSumProblem prob = build_hard_instance(n, 1.0, 8.0, 1.0, hard_instance_params(n, 1.0, 8.0).min_dim + 16);
  SolverConfig cfg;
  cfg.name = "sgd";
  cfg.budget = 20000;
  cfg.seed = 3;
  StaticIfo oracle(prob);
  TraceHooks hooks = error_hooks(prob);
  hooks.sample_every = 50;
  const RunTrace trace = run_sgd(cfg, oracle, hooks);
  // sublinear: the log-log slope is shallow and the semilog slope is near zero
  const double ll = loglog_slope(trace);
  CHECK(ll > -1.5);
  CHECK(ll < 0.0);
  CHECK(std::abs(semilog_slope(trace)) < 1e-3);
}

TEST_CASE("static runs on the hard instance respect the theoretical curve") {
  const int n = 4;
  const double mu = 1.0, L = 8.0, gamma = 1.0;
  const FiniteSumProblem prob = build_hard_instance(n, mu, L, gamma, hard_instance_params(n, mu, L).min_dim + 16);
  for (const std::string name : {"gd", "agm", "cg"}) {
    SolverConfig cfg;
    cfg.name = name;
    cfg.budget = 400;
    StaticIfo oracle(prob);
    const RunTrace trace = run_solver(cfg, oracle, error_hooks(prob));
    for (const TraceSample& s : trace.samples) {
      const BoundValue bound = lower_bound_curve(gamma, L / mu, n, s.k_calls);
      CHECK(s.rel_error * gamma >= bound.value - 1e-9);
    }
  }
}

TEST_CASE("trace csv carries the fixed column layout") {
  const FiniteSumProblem prob = shifted_quadratic(3, 1.0, 5.0, 6, 14);
  StaticIfo oracle(prob);
  SolverConfig cfg;
  cfg.name = "gd";
  cfg.budget = 30;
  const RunTrace trace = run_gd(cfg, oracle, error_hooks(prob));
  std::ostringstream out;
  write_trace_csv(trace, out, [](long long k) { return lower_bound_curve(1.0, 5.0, 3, k).log_value; });
  const std::string csv = out.str();
  CHECK(csv.rfind("algo,seed,k_calls,rel_error,obj,lower_bound,log_lower_bound,wall_ns\n", 0) == 0);
  CHECK(csv.find("gd,0,") != std::string::npos);
}
