#include "ifobench/finite_sum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ifobench/ortho.hpp"

namespace ifobench {

FiniteSumProblem::FiniteSumProblem(int n, double mu, double L, int dim, std::vector<Component> components)
    : n_(n), mu_(mu), L_(L), dim_(dim), components_(std::move(components)),
      gamma_(std::numeric_limits<double>::quiet_NaN()) {
  if (n < 1) throw std::invalid_argument("FiniteSumProblem: n must be positive");
  if (mu <= 0.0) throw std::invalid_argument("FiniteSumProblem: mu must be positive");
  if (L <= mu) throw std::invalid_argument("FiniteSumProblem: L must exceed mu");
  if (dim < 1) throw std::invalid_argument("FiniteSumProblem: dim must be positive");
  if (static_cast<int>(components_.size()) != n)
    throw std::invalid_argument("FiniteSumProblem: component count must equal n");
}

ComponentEval FiniteSumProblem::component(int i, const Point& x) const {
  if (i < 0 || i >= n_) throw std::invalid_argument("FiniteSumProblem::component: index out of range");
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("FiniteSumProblem::component: dimension mismatch");
  return components_[static_cast<std::size_t>(i)](x);
}

double FiniteSumProblem::value(const Point& x) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += component(i, x).value;
  return 0.5 * mu_ * norm2(x) + s / n_;
}

Point FiniteSumProblem::gradient(const Point& x) const {
  Point g = scaled(x, mu_);
  for (int i = 0; i < n_; ++i) axpy(1.0 / n_, component(i, x).grad, g);
  return g;
}

void FiniteSumProblem::set_minimizer(Point xstar) {
  if (static_cast<int>(xstar.size()) != dim_)
    throw std::invalid_argument("FiniteSumProblem::set_minimizer: dimension mismatch");
  gamma_ = norm(xstar);
  minimizer_ = std::move(xstar);
}

HardInstanceParams hard_instance_params(int n, double mu, double L) {
  if (n < 1) throw std::invalid_argument("hard_instance_params: n must be positive");
  if (mu <= 0.0 || L <= mu) throw std::invalid_argument("hard_instance_params: need 0 < mu < L");
  HardInstanceParams p;
  p.mu_c = n * mu;
  p.L_c = L - mu + n * mu;
  p.kappa_c = 1.0 + (L / mu - 1.0) / n;
  p.q_c = decay_rate(p.kappa_c);
  p.min_dim = min_dim_for_tail(p.q_c);
  return p;
}

FiniteSumProblem build_hard_instance(int n, double mu, double L, double gamma, int dim_per_component) {
  if (gamma <= 0.0) throw std::invalid_argument("build_hard_instance: gamma must be positive");
  const HardInstanceParams p = hard_instance_params(n, mu, L);
  if (dim_per_component < p.min_dim)
    throw std::invalid_argument("build_hard_instance: dim_per_component " + std::to_string(dim_per_component) +
                                " violates the tail-mass guard; need >= " + std::to_string(p.min_dim));

  const double gamma_c = gamma / std::sqrt(static_cast<double>(n));
  const double rho_c = rho_for_norm(gamma_c, p.q_c);
  const NesterovFunction chain(p.mu_c, p.L_c, rho_c, dim_per_component);

  std::vector<Component> comps;
  comps.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    comps.push_back([i, n, chain](const Point& x) -> ComponentEval {
      const Point xi = q_restrict(i, n, x);
      const double mu_c = chain.mu();
      const double val = chain.value(xi) - 0.5 * mu_c * norm2(xi);
      Point gc = chain.gradient(xi);
      axpy(-mu_c, xi, gc);
      return {val, q_embed(i, n, gc)};
    });
  }

  FiniteSumProblem problem(n, mu, L, n * dim_per_component, std::move(comps));
  Point xstar = zeros(n * dim_per_component);
  const Point xi_star = chain.minimizer();
  for (int i = 0; i < n; ++i) axpy(1.0, q_embed(i, n, xi_star), xstar);
  problem.set_minimizer(std::move(xstar));
  return problem;
}

}  // namespace ifobench
