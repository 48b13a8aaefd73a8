#include "ifobench/ortho.hpp"

#include <cmath>
#include <stdexcept>

namespace ifobench {

OrthonormalFamily::OrthonormalFamily(int ambient_dim) : dim_(ambient_dim) {
  if (ambient_dim <= 0) throw std::invalid_argument("OrthonormalFamily: ambient dim must be positive");
}

std::span<const double> OrthonormalFamily::member(int j) const {
  if (j < 0 || j >= size_) throw std::invalid_argument("OrthonormalFamily: member index out of range");
  return {flat_.data() + static_cast<std::size_t>(j) * dim_, static_cast<std::size_t>(dim_)};
}

Point OrthonormalFamily::apply(const Point& coeffs) const {
  if (static_cast<int>(coeffs.size()) < size_)
    throw std::invalid_argument("OrthonormalFamily::apply: coefficient vector shorter than family");
  Point out = zeros(dim_);
  for (int j = 0; j < size_; ++j) {
    const double c = coeffs[static_cast<std::size_t>(j)];
    if (c == 0.0) continue;
    const double* s = flat_.data() + static_cast<std::size_t>(j) * dim_;
    for (int k = 0; k < dim_; ++k) out[static_cast<std::size_t>(k)] += c * s[k];
  }
  return out;
}

Point OrthonormalFamily::transpose_apply(const Point& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("OrthonormalFamily::transpose_apply: dimension mismatch");
  Point out(static_cast<std::size_t>(size_));
  for (int j = 0; j < size_; ++j) {
    const double* s = flat_.data() + static_cast<std::size_t>(j) * dim_;
    double acc = 0.0;
    for (int k = 0; k < dim_; ++k) acc += s[k] * x[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

Point OrthonormalFamily::transpose_apply_padded(const Point& x, int out_dim) const {
  Point c = transpose_apply(x);
  c.resize(static_cast<std::size_t>(out_dim), 0.0);
  return c;
}

bool OrthonormalFamily::extend(const Point& v, double tol) {
  if (static_cast<int>(v.size()) != dim_)
    throw std::invalid_argument("OrthonormalFamily::extend: dimension mismatch");
  const double vnorm = norm(v);
  if (vnorm == 0.0) return false;
  if (size_ >= dim_) return false;  // span is already the whole space

  Point r(v);
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < size_; ++j) {
      const double* s = flat_.data() + static_cast<std::size_t>(j) * dim_;
      double proj = 0.0;
      for (int k = 0; k < dim_; ++k) proj += s[k] * r[static_cast<std::size_t>(k)];
      for (int k = 0; k < dim_; ++k) r[static_cast<std::size_t>(k)] -= proj * s[k];
    }
    if (norm(r) <= tol * vnorm) return false;
  }
  const double rnorm = norm(r);
  flat_.resize(flat_.size() + static_cast<std::size_t>(dim_));
  double* dst = flat_.data() + static_cast<std::size_t>(size_) * dim_;
  for (int k = 0; k < dim_; ++k) dst[k] = r[static_cast<std::size_t>(k)] / rnorm;
  ++size_;
  return true;
}

Point OrthonormalFamily::project(const Point& x) const { return apply(transpose_apply(x)); }

double OrthonormalFamily::dist_to_span(const Point& x) const { return norm(sub(x, project(x))); }

Point OrthonormalFamily::mirror(const Point& x) const {
  Point m = project(x);
  scale(m, 2.0);
  return sub(m, x);
}

void OrthonormalFamily::complete_canonical(double tol) {
  for (int j = 0; j < dim_ && size_ < dim_; ++j) extend(basis_vector(dim_, j), tol);
  if (size_ != dim_)
    throw std::runtime_error("OrthonormalFamily::complete_canonical: completion did not reach full dimension");
}

void OrthonormalFamily::negate_members_from(int from) {
  if (from < 0) from = 0;
  for (std::size_t idx = static_cast<std::size_t>(from) * dim_; idx < flat_.size(); ++idx) flat_[idx] = -flat_[idx];
}

double OrthonormalFamily::orthonormality_defect() const {
  double worst = 0.0;
  for (int i = 0; i < size_; ++i) {
    const double* si = flat_.data() + static_cast<std::size_t>(i) * dim_;
    for (int j = i; j < size_; ++j) {
      const double* sj = flat_.data() + static_cast<std::size_t>(j) * dim_;
      double acc = 0.0;
      for (int k = 0; k < dim_; ++k) acc += si[k] * sj[k];
      const double defect = std::abs(acc - (i == j ? 1.0 : 0.0));
      if (defect > worst) worst = defect;
    }
  }
  return worst;
}

Point q_embed(int i, int n, const Point& x) {
  if (n <= 0 || i < 0 || i >= n) throw std::invalid_argument("q_embed: index out of range");
  Point out = zeros(n * static_cast<int>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) out[j * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = x[j];
  return out;
}

Point q_restrict(int i, int n, const Point& y) {
  if (n <= 0 || i < 0 || i >= n) throw std::invalid_argument("q_restrict: index out of range");
  if (y.size() % static_cast<std::size_t>(n) != 0)
    throw std::invalid_argument("q_restrict: ambient dimension not a multiple of n");
  const std::size_t m = y.size() / static_cast<std::size_t>(n);
  Point out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = y[j * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
  return out;
}

}  // namespace ifobench
