#pragma once

#include "ifobench/vec.hpp"

namespace ifobench {

// Relative tail mass allowed beyond the truncation dimension.
inline constexpr double kTailGuard = 1e-12;

// Geometric decay rate of the minimizer for condition number kappa >= 1:
// (sqrt(kappa) - 1) / (sqrt(kappa) + 1).
double decay_rate(double kappa);

// Smallest dimension d with q^d <= kTailGuard.
int min_dim_for_tail(double q);

// rho = gamma * sqrt(1 - q^2) / q, so that the minimizer's full geometric
// series has norm exactly gamma. Requires gamma > 0 and q in (0,1); q == 0
// (kappa == 1) is rejected as degenerate.
double rho_for_norm(double gamma, double q);

// Nesterov's chain-structured worst-case quadratic, truncated to `dim`
// coordinates:
//
//   f(x) = (L-mu)/8 * ( x_1^2 + sum_{i<dim} (x_{i+1} - x_i)^2 - 2 rho x_1 )
//          + mu/2 ||x||^2
//
// The gradient is the exact gradient of the truncated function; the last
// coordinate drops the terms that would reference coordinate dim+1. The
// minimizer decays as rho * q^i, so `dim` must satisfy q^dim <= kTailGuard
// (checked at construction) to keep the neglected tail below 1e-12 relative.
class NesterovFunction {
 public:
  NesterovFunction(double mu, double L, double rho, int dim);

  double mu() const { return mu_; }
  double L() const { return L_; }
  double rho() const { return rho_; }
  int dim() const { return dim_; }
  double kappa() const { return L_ / mu_; }
  double q() const { return q_; }

  double value(const Point& x) const;
  Point gradient(const Point& x) const;

  // (rho q, rho q^2, ..., rho q^dim). Differs from the exact minimizer of
  // the truncated function by O(rho q^dim) in the last coordinates.
  Point minimizer() const;

  // Hessian-vector product: (L-mu)/4 * T x + mu x with T the second
  // difference form of the chain.
  Point hessian_apply(const Point& x) const;

  // Stationarity system of the truncated function, A x = (L-mu) rho / 4 e_1,
  // exposed as the tridiagonal (diag, off) of A for independent solves.
  void stationarity_system(Point& diag, Point& off, Point& rhs) const;

 private:
  double mu_, L_, rho_, q_;
  int dim_;
};

}  // namespace ifobench
