#include "ifobench/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ifobench/errors.hpp"

namespace ifobench {

Point tridiag_spd_solve(const Point& diag, const Point& off, const Point& rhs) {
  const std::size_t n = diag.size();
  if (n == 0) throw std::invalid_argument("tridiag_spd_solve: empty system");
  if (off.size() + 1 != n) throw std::invalid_argument("tridiag_spd_solve: off-diagonal length must be n-1");
  if (rhs.size() != n) throw std::invalid_argument("tridiag_spd_solve: rhs dimension mismatch");

  // LDL^T: d[i] are the pivots, l[i] the subdiagonal multipliers.
  Point d(n), l(n > 1 ? n - 1 : 0);
  d[0] = diag[0];
  if (d[0] <= 0.0) throw SingularMatrixError("tridiag_spd_solve: non-positive pivot at row 0");
  for (std::size_t i = 1; i < n; ++i) {
    l[i - 1] = off[i - 1] / d[i - 1];
    d[i] = diag[i] - l[i - 1] * off[i - 1];
    if (d[i] <= 0.0)
      throw SingularMatrixError("tridiag_spd_solve: non-positive pivot at row " + std::to_string(i));
  }

  Point x(rhs);
  for (std::size_t i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
  for (std::size_t i = n - 1; i > 0; --i) x[i - 1] -= l[i - 1] * x[i];
  return x;
}

std::vector<double> dense_sym_eigenvalues(std::vector<double> a, int dim) {
  if (dim <= 0) throw std::invalid_argument("dense_sym_eigenvalues: dim must be positive");
  if (a.size() != static_cast<std::size_t>(dim) * dim)
    throw std::invalid_argument("dense_sym_eigenvalues: matrix size mismatch");
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * dim + j]; };

  double frob = 0.0;
  for (double v : a) frob += v * v;
  frob = std::sqrt(frob);
  const double stop = std::max(frob, 1.0) * 1e-15;

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) off += at(i, j) * at(i, j);
    if (std::sqrt(off) <= stop) break;

    for (int p = 0; p < dim - 1; ++p) {
      for (int q = p + 1; q < dim; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) <= stop / dim) continue;
        const double app = at(p, p), aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < dim; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < dim; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eigs(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) eigs[static_cast<std::size_t>(i)] = at(i, i);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

namespace {

// Eigenvalues of a (small) symmetric tridiagonal matrix, reusing the dense
// path. Sizes here are Lanczos iteration counts, a few hundred at most.
std::vector<double> tridiag_eigenvalues(const Point& alpha, const Point& beta) {
  const int m = static_cast<int>(alpha.size());
  std::vector<double> t(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    t[static_cast<std::size_t>(i) * m + i] = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) {
      t[static_cast<std::size_t>(i) * m + i + 1] = beta[static_cast<std::size_t>(i)];
      t[static_cast<std::size_t>(i + 1) * m + i] = beta[static_cast<std::size_t>(i)];
    }
  }
  return dense_sym_eigenvalues(std::move(t), m);
}

std::pair<double, double> lanczos_extremes(const SymOperator& apply, int dim, double tol) {
  const int max_iter = std::min(dim, 400);
  Rng rng(0x1f0b3a55u);

  std::vector<Point> basis;
  Point alpha, beta;
  Point v = rng.normal_vector(dim);
  scale(v, 1.0 / norm(v));
  basis.push_back(v);

  double best_min = 0.0, best_max = 0.0;
  double prev_min = 0.0, prev_max = 0.0;
  bool have_prev = false;

  for (int m = 1; m <= max_iter; ++m) {
    Point w = apply(basis.back());
    const double a = dot(basis.back(), w);
    alpha.push_back(a);
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass)
      for (const Point& q : basis) axpy(-dot(q, w), q, w);
    const double b = norm(w);

    const auto eigs = tridiag_eigenvalues(alpha, beta);
    best_min = eigs.front();
    best_max = eigs.back();
    const double spread = std::max(best_max - best_min, std::abs(best_max));
    const double scale_ref = std::max(spread, 1e-300);

    if (b <= scale_ref * 1e-14) return {best_min, best_max};  // invariant subspace captured
    if (have_prev && m >= 8) {
      const double change = std::max(std::abs(best_min - prev_min), std::abs(best_max - prev_max));
      if (change <= tol * scale_ref * 0.01) return {best_min, best_max};
    }
    prev_min = best_min;
    prev_max = best_max;
    have_prev = true;

    if (m == max_iter) break;
    beta.push_back(b);
    scale(w, 1.0 / b);
    basis.push_back(std::move(w));
  }
  throw ConvergenceError("extreme_eigs_sym: Lanczos did not converge within iteration cap", best_min, best_max);
}

}  // namespace

std::pair<double, double> extreme_eigs_sym(const SymOperator& apply, int dim, double tol) {
  if (dim < 1) throw std::invalid_argument("extreme_eigs_sym: dim must be >= 1");
  if (dim == 1) {
    const double v = apply(Point{1.0})[0];
    return {v, v};
  }
  if (dim <= 512) {
    std::vector<double> a(static_cast<std::size_t>(dim) * dim);
    for (int j = 0; j < dim; ++j) {
      const Point col = apply(basis_vector(dim, j));
      for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(i) * dim + j] = col[static_cast<std::size_t>(i)];
    }
    // symmetrize to wash out operator roundoff
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        const double s = 0.5 * (a[static_cast<std::size_t>(i) * dim + j] + a[static_cast<std::size_t>(j) * dim + i]);
        a[static_cast<std::size_t>(i) * dim + j] = s;
        a[static_cast<std::size_t>(j) * dim + i] = s;
      }
    const auto eigs = dense_sym_eigenvalues(std::move(a), dim);
    return {eigs.front(), eigs.back()};
  }
  return lanczos_extremes(apply, dim, tol);
}

Point dense_spd_solve(std::vector<double> a, int dim, const Point& rhs) {
  if (a.size() != static_cast<std::size_t>(dim) * dim || rhs.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("dense_spd_solve: size mismatch");
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * dim + j]; };

  // Cholesky A = L L^T stored in the lower triangle
  for (int j = 0; j < dim; ++j) {
    double d = at(j, j);
    for (int k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
    if (d <= 0.0) throw SingularMatrixError("dense_spd_solve: matrix not positive definite");
    const double ljj = std::sqrt(d);
    at(j, j) = ljj;
    for (int i = j + 1; i < dim; ++i) {
      double s = at(i, j);
      for (int k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
      at(i, j) = s / ljj;
    }
  }
  Point x(rhs);
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < i; ++k) x[static_cast<std::size_t>(i)] -= at(i, k) * x[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(i)] /= at(i, i);
  }
  for (int i = dim - 1; i >= 0; --i) {
    for (int k = i + 1; k < dim; ++k) x[static_cast<std::size_t>(i)] -= at(k, i) * x[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(i)] /= at(i, i);
  }
  return x;
}

}  // namespace ifobench
