#include "ifobench/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ifobench/errors.hpp"

namespace ifobench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Tracer {
 public:
  Tracer(const SolverConfig& cfg, const TraceHooks& hooks) : hooks_(hooks), start_(std::chrono::steady_clock::now()) {
    trace_.algo = cfg.name;
    trace_.seed = cfg.seed;
    stride_ = hooks.sample_every > 0 ? hooks.sample_every : std::max<long long>(1, cfg.budget / 256);
  }

  void record(const Ifo& oracle, const Point& x, bool force = false) {
    const long long k = oracle.calls();
    if (!force && k < next_) return;
    if (!trace_.samples.empty() && trace_.samples.back().k_calls == k) return;
    TraceSample s;
    s.k_calls = k;
    s.rel_error = hooks_.rel_error ? hooks_.rel_error(x) : kNaN;
    s.objective = hooks_.objective ? hooks_.objective(x) : kNaN;
    s.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start_).count();
    if (hooks_.keep_iterates) s.iterate = x;
    trace_.samples.push_back(std::move(s));
    while (next_ <= k) next_ += stride_;
  }

  RunTrace take(const Ifo& oracle, Point final_iterate) {
    record(oracle, final_iterate, true);
    trace_.final_iterate = std::move(final_iterate);
    trace_.total_calls = oracle.calls();
    return std::move(trace_);
  }

 private:
  RunTrace trace_;
  TraceHooks hooks_;
  long long stride_ = 1;
  long long next_ = 0;
  std::chrono::steady_clock::time_point start_;
};

void check_budget(const SolverConfig& cfg) {
  if (cfg.budget <= 0) throw std::invalid_argument("solver budget must be positive");
}

// f'(x) assembled from one IFO call per component plus the known mu x term.
Point full_gradient(Ifo& oracle, const Point& x) {
  Point g = scaled(x, oracle.mu());
  const int n = oracle.n();
  for (int i = 0; i < n; ++i) axpy(1.0 / n, oracle.query(i, x).grad, g);
  return g;
}

}  // namespace

RunTrace run_gd(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks) {
  check_budget(cfg);
  const double eta = cfg.step.value_or(1.0 / oracle.L());
  const int n = oracle.n();
  Tracer tracer(cfg, hooks);
  Point x = zeros(oracle.dim());
  tracer.record(oracle, x, true);
  while (oracle.calls() + n <= cfg.budget) {
    const Point g = full_gradient(oracle, x);
    axpy(-eta, g, x);
    tracer.record(oracle, x);
  }
  return tracer.take(oracle, std::move(x));
}

RunTrace run_agm(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks) {
  check_budget(cfg);
  const double mu_eff = cfg.mu_eff.value_or(oracle.mu());
  const double L_eff = cfg.L_eff.value_or(oracle.L());
  if (mu_eff <= 0.0 || L_eff < mu_eff) throw std::invalid_argument("run_agm: need 0 < mu_eff <= L_eff");
  const double eta = cfg.step.value_or(1.0 / L_eff);
  const double kappa_eff = L_eff / mu_eff;
  const double beta = kappa_eff > 1.0 ? (std::sqrt(kappa_eff) - 1.0) / (std::sqrt(kappa_eff) + 1.0) : 0.0;
  const int n = oracle.n();

  Tracer tracer(cfg, hooks);
  Point x = zeros(oracle.dim());
  Point y = x;
  tracer.record(oracle, x, true);
  while (oracle.calls() + n <= cfg.budget) {
    const Point g = full_gradient(oracle, y);
    Point x_next = y;
    axpy(-eta, g, x_next);
    y = x_next;
    Point momentum = sub(x_next, x);
    axpy(beta, momentum, y);
    x = std::move(x_next);
    tracer.record(oracle, x);
  }
  return tracer.take(oracle, std::move(x));
}

RunTrace run_cg(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks) {
  check_budget(cfg);
  const int n = oracle.n();
  Tracer tracer(cfg, hooks);
  Point x = zeros(oracle.dim());
  tracer.record(oracle, x, true);
  if (oracle.calls() + n > cfg.budget) return tracer.take(oracle, std::move(x));

  const Point g0 = full_gradient(oracle, x);
  Point r = scaled(g0, -1.0);
  Point p = r;
  double rs = norm2(r);
  bool linearity_checked = false;

  while (oracle.calls() + n <= cfg.budget && rs > 0.0) {
    // A p = f'(p) - f'(0) for a quadratic objective
    const Point gp = full_gradient(oracle, p);
    const Point Ap = sub(gp, g0);
    if (!linearity_checked && oracle.calls() + n <= cfg.budget) {
      const Point g2p = full_gradient(oracle, scaled(p, 2.0));
      const Point A2p = sub(g2p, g0);
      const double defect = norm(sub(A2p, scaled(Ap, 2.0)));
      if (defect > 1e-6 * std::max(1.0, norm(A2p)))
        throw UnsupportedObjectiveError("run_cg: objective failed the gradient linearity probe");
      linearity_checked = true;
    }
    const double pAp = dot(p, Ap);
    if (pAp <= 0.0) break;  // numerically exhausted search direction
    const double alpha = rs / pAp;
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    const double rs_next = norm2(r);
    Point p_next = r;
    axpy(rs_next / rs, p, p_next);
    p = std::move(p_next);
    rs = rs_next;
    tracer.record(oracle, x);
  }
  return tracer.take(oracle, std::move(x));
}

RunTrace run_sgd(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks) {
  check_budget(cfg);
  const int n = oracle.n();
  const double mu = oracle.mu();
  const double L = oracle.L();
  const double k0 = std::ceil(2.0 * L / mu);
  Rng rng(cfg.seed);

  Tracer tracer(cfg, hooks);
  Point x = zeros(oracle.dim());
  tracer.record(oracle, x, true);
  long long k = 0;
  while (oracle.calls() < cfg.budget) {
    const int i = rng.next_index(n);
    Point g = oracle.query(i, x).grad;
    axpy(mu, x, g);
    const double eta = cfg.step.value_or(std::min(1.0 / L, 2.0 / (mu * (static_cast<double>(k) + k0))));
    axpy(-eta, g, x);
    ++k;
    tracer.record(oracle, x);
  }
  return tracer.take(oracle, std::move(x));
}

RunTrace run_sag(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks) {
  check_budget(cfg);
  const int n = oracle.n();
  const double mu = oracle.mu();
  const double eta = cfg.step.value_or(1.0 / (16.0 * oracle.L()));
  Rng rng(cfg.seed);

  Tracer tracer(cfg, hooks);
  Point x = zeros(oracle.dim());
  std::vector<Point> table(static_cast<std::size_t>(n), zeros(oracle.dim()));
  Point avg = zeros(oracle.dim());
  tracer.record(oracle, x, true);
  while (oracle.calls() < cfg.budget) {
    const int i = rng.next_index(n);
    Point gi = oracle.query(i, x).grad;
    Point& slot = table[static_cast<std::size_t>(i)];
    // avg tracks (1/n) sum of the stored component gradients
    for (std::size_t j = 0; j < avg.size(); ++j) avg[j] += (gi[j] - slot[j]) / n;
    slot = std::move(gi);
    Point dir = avg;
    axpy(mu, x, dir);
    axpy(-eta, dir, x);
    tracer.record(oracle, x);
  }
  return tracer.take(oracle, std::move(x));
}

RunTrace run_saga(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks) {
  check_budget(cfg);
  const int n = oracle.n();
  const double mu = oracle.mu();
  const double eta = cfg.step.value_or(1.0 / (3.0 * oracle.L()));
  Rng rng(cfg.seed);

  Tracer tracer(cfg, hooks);
  Point x = zeros(oracle.dim());
  std::vector<Point> table(static_cast<std::size_t>(n), zeros(oracle.dim()));
  Point avg = zeros(oracle.dim());
  tracer.record(oracle, x, true);
  while (oracle.calls() < cfg.budget) {
    const int i = rng.next_index(n);
    const Point gi = oracle.query(i, x).grad;
    Point& slot = table[static_cast<std::size_t>(i)];
    Point step_dir = x;  // mu x handled in closed form
    scale(step_dir, mu);
    for (std::size_t j = 0; j < step_dir.size(); ++j) step_dir[j] += gi[j] - slot[j] + avg[j];
    axpy(-eta, step_dir, x);
    for (std::size_t j = 0; j < avg.size(); ++j) avg[j] += (gi[j] - slot[j]) / n;
    slot = gi;
    tracer.record(oracle, x);
  }
  return tracer.take(oracle, std::move(x));
}

RunTrace run_svrg(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks) {
  check_budget(cfg);
  const int n = oracle.n();
  const double mu = oracle.mu();
  const double L = oracle.L();
  const double eta = cfg.step.value_or(1.0 / (10.0 * L));
  const long long m = cfg.epoch.value_or(2 * static_cast<long long>(n) + static_cast<long long>(std::ceil(L / mu)));
  Rng rng(cfg.seed);

  Tracer tracer(cfg, hooks);
  Point x = zeros(oracle.dim());
  tracer.record(oracle, x, true);
  std::vector<Point> anchor_grads(static_cast<std::size_t>(n));
  while (oracle.calls() + n <= cfg.budget) {
    // anchor pass: n calls, gradients cached so inner steps cost one call
    const Point anchor = x;
    Point gbar = zeros(oracle.dim());
    for (int i = 0; i < n; ++i) {
      anchor_grads[static_cast<std::size_t>(i)] = oracle.query(i, anchor).grad;
      axpy(1.0 / n, anchor_grads[static_cast<std::size_t>(i)], gbar);
    }
    for (long long t = 0; t < m && oracle.calls() < cfg.budget; ++t) {
      const int i = rng.next_index(n);
      const Point gi = oracle.query(i, x).grad;
      const Point& ga = anchor_grads[static_cast<std::size_t>(i)];
      Point v = x;
      scale(v, mu);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += gi[j] - ga[j] + gbar[j];
      axpy(-eta, v, x);
      tracer.record(oracle, x);
    }
  }
  return tracer.take(oracle, std::move(x));
}

namespace {
const std::vector<std::string> kSolverNames = {"gd", "agm", "cg", "sgd", "sag", "svrg", "saga"};
}

bool solver_exists(const std::string& name) {
  return std::find(kSolverNames.begin(), kSolverNames.end(), name) != kSolverNames.end();
}

bool solver_deterministic(const std::string& name) { return name == "gd" || name == "agm" || name == "cg"; }

const std::vector<std::string>& solver_names() { return kSolverNames; }

RunTrace run_solver(const SolverConfig& cfg, Ifo& oracle, const TraceHooks& hooks) {
  if (cfg.name == "gd") return run_gd(cfg, oracle, hooks);
  if (cfg.name == "agm") return run_agm(cfg, oracle, hooks);
  if (cfg.name == "cg") return run_cg(cfg, oracle, hooks);
  if (cfg.name == "sgd") return run_sgd(cfg, oracle, hooks);
  if (cfg.name == "sag") return run_sag(cfg, oracle, hooks);
  if (cfg.name == "svrg") return run_svrg(cfg, oracle, hooks);
  if (cfg.name == "saga") return run_saga(cfg, oracle, hooks);
  throw std::invalid_argument("run_solver: unknown solver '" + cfg.name + "'");
}

void backfill_rel_errors(RunTrace& trace, const Point& xstar, double gamma) {
  for (TraceSample& s : trace.samples)
    if (!s.iterate.empty()) s.rel_error = norm(sub(s.iterate, xstar)) / gamma;
}

namespace {

double fit_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) return kNaN;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [px, py] : pts) {
    sx += px;
    sy += py;
    sxx += px * px;
    sxy += px * py;
  }
  const double m = static_cast<double>(pts.size());
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) return kNaN;
  return (m * sxy - sx * sy) / denom;
}

}  // namespace

double loglog_slope(const RunTrace& trace) {
  std::vector<std::pair<double, double>> pts;
  for (const TraceSample& s : trace.samples)
    if (s.k_calls >= 1 && std::isfinite(s.rel_error) && s.rel_error > 0.0)
      pts.emplace_back(std::log(static_cast<double>(s.k_calls)), std::log(s.rel_error));
  return fit_slope(pts);
}

double semilog_slope(const RunTrace& trace) {
  std::vector<std::pair<double, double>> pts;
  for (const TraceSample& s : trace.samples)
    if (std::isfinite(s.rel_error) && s.rel_error > 0.0)
      pts.emplace_back(static_cast<double>(s.k_calls), std::log(s.rel_error));
  return fit_slope(pts);
}

void write_trace_csv(const RunTrace& trace, std::ostream& out, const std::function<double(long long)>& ln_bound) {
  out << "algo,seed,k_calls,rel_error,obj,lower_bound,log_lower_bound,wall_ns\n";
  for (const TraceSample& s : trace.samples) {
    double lb = kNaN, log_lb = kNaN;
    if (ln_bound) {
      log_lb = ln_bound(s.k_calls);
      lb = log_lb > std::log(1e-300) ? std::exp(log_lb) : 0.0;
    }
    out << trace.algo << ',' << trace.seed << ',' << s.k_calls << ',' << fmt_double(s.rel_error) << ','
        << fmt_double(s.objective) << ',' << fmt_double(lb) << ',' << fmt_double(log_lb) << ',' << s.wall_ns << '\n';
  }
}

}  // namespace ifobench
