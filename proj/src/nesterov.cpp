#include "ifobench/nesterov.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ifobench {

double decay_rate(double kappa) {
  if (kappa < 1.0) throw std::domain_error("decay_rate: kappa must be >= 1");
  const double r = std::sqrt(kappa);
  return (r - 1.0) / (r + 1.0);
}

int min_dim_for_tail(double q) {
  if (q <= 0.0) return 1;
  if (q >= 1.0) throw std::domain_error("min_dim_for_tail: q must be < 1");
  return static_cast<int>(std::ceil(std::log(kTailGuard) / std::log(q)));
}

double rho_for_norm(double gamma, double q) {
  if (gamma <= 0.0) throw std::domain_error("rho_for_norm: gamma must be positive");
  if (q <= 0.0 || q >= 1.0)
    throw std::domain_error("rho_for_norm: q must lie in (0,1); kappa == 1 gives a degenerate instance");
  return gamma * std::sqrt(1.0 - q * q) / q;
}

NesterovFunction::NesterovFunction(double mu, double L, double rho, int dim)
    : mu_(mu), L_(L), rho_(rho), dim_(dim) {
  if (mu <= 0.0) throw std::invalid_argument("NesterovFunction: mu must be positive");
  if (L <= mu) throw std::invalid_argument("NesterovFunction: L must exceed mu");
  if (rho < 0.0) throw std::invalid_argument("NesterovFunction: rho must be non-negative");
  if (dim < 1) throw std::invalid_argument("NesterovFunction: dim must be positive");
  q_ = decay_rate(L / mu);
  const int needed = min_dim_for_tail(q_);
  if (dim < needed)
    throw std::invalid_argument("NesterovFunction: dim " + std::to_string(dim) +
                                " violates the tail-mass guard; need dim >= " + std::to_string(needed));
}

double NesterovFunction::value(const Point& x) const {
  if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("NesterovFunction::value: dimension mismatch");
  const double c = (L_ - mu_) / 8.0;
  double chain = x[0] * x[0] - 2.0 * rho_ * x[0];
  for (int i = 0; i + 1 < dim_; ++i) {
    const double d = x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)];
    chain += d * d;
  }
  return c * chain + 0.5 * mu_ * norm2(x);
}

Point NesterovFunction::gradient(const Point& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("NesterovFunction::gradient: dimension mismatch");
  const double c = (L_ - mu_) / 4.0;
  Point g(static_cast<std::size_t>(dim_));
  if (dim_ == 1) {
    g[0] = c * (x[0] - rho_) + mu_ * x[0];
    return g;
  }
  g[0] = c * (2.0 * x[0] - x[1] - rho_) + mu_ * x[0];
  for (int i = 1; i + 1 < dim_; ++i)
    g[static_cast<std::size_t>(i)] =
        c * (2.0 * x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i + 1)] -
             x[static_cast<std::size_t>(i - 1)]) +
        mu_ * x[static_cast<std::size_t>(i)];
  g[static_cast<std::size_t>(dim_ - 1)] =
      c * (x[static_cast<std::size_t>(dim_ - 1)] - x[static_cast<std::size_t>(dim_ - 2)]) +
      mu_ * x[static_cast<std::size_t>(dim_ - 1)];
  return g;
}

Point NesterovFunction::minimizer() const {
  Point m(static_cast<std::size_t>(dim_));
  double p = rho_;
  for (int i = 0; i < dim_; ++i) {
    p *= q_;
    m[static_cast<std::size_t>(i)] = p;
  }
  return m;
}

Point NesterovFunction::hessian_apply(const Point& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("NesterovFunction::hessian_apply: dimension mismatch");
  const double c = (L_ - mu_) / 4.0;
  Point g(static_cast<std::size_t>(dim_));
  if (dim_ == 1) {
    g[0] = (c + mu_) * x[0];
    return g;
  }
  g[0] = c * (2.0 * x[0] - x[1]) + mu_ * x[0];
  for (int i = 1; i + 1 < dim_; ++i)
    g[static_cast<std::size_t>(i)] =
        c * (2.0 * x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i + 1)] -
             x[static_cast<std::size_t>(i - 1)]) +
        mu_ * x[static_cast<std::size_t>(i)];
  g[static_cast<std::size_t>(dim_ - 1)] =
      c * (x[static_cast<std::size_t>(dim_ - 1)] - x[static_cast<std::size_t>(dim_ - 2)]) +
      mu_ * x[static_cast<std::size_t>(dim_ - 1)];
  return g;
}

void NesterovFunction::stationarity_system(Point& diag, Point& off, Point& rhs) const {
  const double c = (L_ - mu_) / 4.0;
  diag.assign(static_cast<std::size_t>(dim_), 2.0 * c + mu_);
  diag[static_cast<std::size_t>(dim_ - 1)] = c + mu_;
  if (dim_ == 1) diag[0] = c + mu_;
  off.assign(static_cast<std::size_t>(dim_ > 1 ? dim_ - 1 : 0), -c);
  rhs = zeros(dim_);
  rhs[0] = c * rho_;
}

}  // namespace ifobench
