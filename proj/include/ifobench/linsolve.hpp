#pragma once

#include <functional>
#include <utility>

#include "ifobench/vec.hpp"

namespace ifobench {

// Solves the symmetric positive definite tridiagonal system
//   diag[i] x[i] + off[i-1] x[i-1] + off[i] x[i+1] = rhs[i]
// by LDL^T factorization without pivoting. Throws SingularMatrixError on a
// non-positive pivot. Residual ||Ax - rhs|| <= 1e-10 ||rhs|| for
// well-conditioned inputs.
Point tridiag_spd_solve(const Point& diag, const Point& off, const Point& rhs);

using SymOperator = std::function<Point(const Point&)>;

// Extreme eigenvalues (lambda_min, lambda_max) of a symmetric operator.
// Dense path (cyclic Jacobi on the materialized matrix) for dim <= 512;
// Lanczos with full reorthogonalization above. Throws ConvergenceError
// carrying the best estimates if the iterative path stalls.
std::pair<double, double> extreme_eigs_sym(const SymOperator& apply, int dim, double tol = 1e-8);

// All eigenvalues of a dense symmetric matrix (row-major dim x dim),
// ascending. Cyclic Jacobi; intended for dim <= ~512.
std::vector<double> dense_sym_eigenvalues(std::vector<double> a, int dim);

// Dense SPD solve (Cholesky), row-major. Used for small normal-equation
// systems such as the regularized least-squares minimizer.
Point dense_spd_solve(std::vector<double> a, int dim, const Point& rhs);

}  // namespace ifobench
