#include "ifobench/vec.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ifobench {

Point zeros(int dim) {
  if (dim < 0) throw std::invalid_argument("zeros: negative dimension");
  return Point(static_cast<std::size_t>(dim), 0.0);
}

Point basis_vector(int dim, int index) {
  if (index < 0 || index >= dim) throw std::invalid_argument("basis_vector: index out of range");
  Point e = zeros(dim);
  e[static_cast<std::size_t>(index)] = 1.0;
  return e;
}

double dot(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Point& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double norm(const Point& a) { return std::sqrt(norm2(a)); }

void axpy(double alpha, const Point& x, Point& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(Point& x, double alpha) {
  for (double& v : x) v *= alpha;
}

Point add(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
  Point r(a);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Point sub(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
  Point r(a);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

Point scaled(const Point& a, double alpha) {
  Point r(a);
  scale(r, alpha);
  return r;
}

bool all_finite(const Point& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

// splitmix64
std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = next_double();
  } while (u1 <= 0.0);
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

int Rng::next_index(int n) {
  if (n <= 0) throw std::invalid_argument("next_index: n must be positive");
  // rejection sampling keeps the distribution exactly uniform
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = 0;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % bound);
}

Point Rng::normal_vector(int dim) {
  Point v(static_cast<std::size_t>(dim));
  for (double& x : v) x = next_normal();
  return v;
}

Point Rng::sphere_vector(int dim, double r) {
  Point v;
  double n = 0.0;
  do {
    v = normal_vector(dim);
    n = norm(v);
  } while (n == 0.0);
  scale(v, r / n);
  return v;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ifobench
