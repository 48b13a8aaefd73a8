#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ifobench {

// Universal dense vector currency. All constructions in this library are
// finite-dimensional truncations chosen so that the neglected tail mass is
// below 1e-12 relative (see the tail guards in nesterov.hpp).
using Point = std::vector<double>;

Point zeros(int dim);
Point basis_vector(int dim, int index);

double dot(const Point& a, const Point& b);
double norm2(const Point& a);
double norm(const Point& a);

// y += alpha * x
void axpy(double alpha, const Point& x, Point& y);
void scale(Point& x, double alpha);
Point add(const Point& a, const Point& b);
Point sub(const Point& a, const Point& b);
Point scaled(const Point& a, double alpha);

bool all_finite(const Point& a);

// Deterministic pseudo-random streams. Hand-rolled so that generated
// datasets and solver runs are bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64();
  // uniform in [0, 1)
  double next_double();
  // standard normal via Box-Muller
  double next_normal();
  // uniform integer in [0, n)
  int next_index(int n);

  Point normal_vector(int dim);
  // uniform on the radius-r sphere in dimension dim
  Point sphere_vector(int dim, double r);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Shortest-round-trip style formatting used by every CSV/JSON writer so that
// identical runs produce identical bytes.
std::string fmt_double(double v);

}  // namespace ifobench
