#pragma once

#include <functional>
#include <optional>

#include "ifobench/nesterov.hpp"
#include "ifobench/vec.hpp"

namespace ifobench {

struct ComponentEval {
  double value;
  Point grad;
};

// One component oracle g_i: returns value and gradient at a point.
using Component = std::function<ComponentEval(const Point&)>;

// A finite sum f(x) = mu/2 ||x||^2 + (1/n) sum_i g_i(x) with each g_i convex
// and (L - mu)-smooth. Immutable after construction; concurrent read-only
// evaluation is safe.
class FiniteSumProblem {
 public:
  FiniteSumProblem(int n, double mu, double L, int dim, std::vector<Component> components);

  int n() const { return n_; }
  double mu() const { return mu_; }
  double L() const { return L_; }
  int dim() const { return dim_; }
  double kappa() const { return L_ / mu_; }

  ComponentEval component(int i, const Point& x) const;

  double value(const Point& x) const;
  Point gradient(const Point& x) const;

  void set_minimizer(Point xstar);
  const std::optional<Point>& minimizer() const { return minimizer_; }
  // ||x*||; NaN when the minimizer is unknown.
  double gamma() const { return gamma_; }

 private:
  int n_;
  double mu_, L_;
  int dim_;
  std::vector<Component> components_;
  std::optional<Point> minimizer_;
  double gamma_;
};

// Worst-case separable instance: component i is h_i applied to the i-th
// interleaved coordinate block, with
//
//   h_i(y) = N_{n mu, L - mu + n mu}(y) - (n mu / 2) ||y||^2,
//
// which is convex and (L - mu)-smooth. Per-component decay uses
// kappa_c = 1 + (kappa - 1)/n and the per-component minimizer norm is
// gamma / sqrt(n), so the assembled minimizer (carried by the returned
// problem) has norm gamma up to the truncation tail.
//
// dim_per_component must satisfy the tail guard for the per-component rate;
// otherwise construction fails naming the required dimension.
FiniteSumProblem build_hard_instance(int n, double mu, double L, double gamma, int dim_per_component);

// Per-component parameters of the hard instance, exposed for reuse by the
// adversarial oracle.
struct HardInstanceParams {
  double mu_c;     // n * mu
  double L_c;      // L - mu + n * mu
  double kappa_c;  // 1 + (kappa - 1)/n
  double q_c;
  int min_dim;
};
HardInstanceParams hard_instance_params(int n, double mu, double L);

}  // namespace ifobench
