#pragma once

#include <span>

#include "ifobench/vec.hpp"

namespace ifobench {

// Default tolerance for the "already in span" branch of Gram-Schmidt and for
// orthonormality defect checks.
inline constexpr double kInSpanTol = 1e-10;

// An ordered family of mutually orthonormal vectors in a fixed ambient
// dimension. Conventions follow the usual operator notation: for a family
// S = [s_0, s_1, ...],
//
//   apply(c)            = sum_j c[j] * s_j        (members beyond the family
//                                                  size act as zero)
//   transpose_apply(x)  = (<s_j, x>)_j
//
// which makes S a partial isometry between coefficient space and the span.
class OrthonormalFamily {
 public:
  explicit OrthonormalFamily(int ambient_dim);

  int dim() const { return dim_; }
  int size() const { return size_; }

  std::span<const double> member(int j) const;

  // S c with coefficients beyond size() ignored; requires c.size() >= size().
  Point apply(const Point& coeffs) const;

  // (<s_j, x>)_j, length size().
  Point transpose_apply(const Point& x) const;

  // Same, zero-padded (or truncated) to out_dim coefficients.
  Point transpose_apply_padded(const Point& x, int out_dim) const;

  // Gram-Schmidt extension: appends the normalized residual of v unless v
  // already lies in the span up to tol * ||v||. One re-orthogonalization
  // pass keeps the family orthonormal to ~1e-14 for sizes in the thousands.
  // Returns true iff the family grew.
  bool extend(const Point& v, double tol = kInSpanTol);

  Point project(const Point& x) const;
  double dist_to_span(const Point& x) const;
  // 2 P(x) - x, the reflection of x about the span; an isometry.
  Point mirror(const Point& x) const;

  // Extends with canonical basis vectors in index order until size == dim.
  void complete_canonical(double tol = kInSpanTol);

  // Flips the sign of all members with index >= from. Used to switch between
  // the two symmetric completions of a partially determined basis.
  void negate_members_from(int from);

  // max_{i<=j} |<s_i, s_j> - delta_ij|; re-checkable on demand.
  double orthonormality_defect() const;

 private:
  int dim_;
  int size_ = 0;
  std::vector<double> flat_;  // row-major, member j at flat_[j*dim_ ...]
};

// Interleaved canonical embeddings: component i of n owns every n-th
// coordinate of the ambient space. embed scatters coordinate j of x to
// ambient position j*n + i; restrict gathers them back. Both are exact
// permutation-style maps (no arithmetic). Indices are 0-based.
Point q_embed(int i, int n, const Point& x);
Point q_restrict(int i, int n, const Point& y);

}  // namespace ifobench
