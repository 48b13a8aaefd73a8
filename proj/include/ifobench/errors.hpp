#pragma once

#include <stdexcept>
#include <string>

namespace ifobench {

// Tridiagonal factorization hit a non-positive pivot.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative eigenvalue estimation ran out of iterations; carries the best
// estimates found so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_min, double best_max)
      : std::runtime_error(what), best_min(best_min), best_max(best_max) {}
  double best_min;
  double best_max;
};

// The adversary cannot honor another query (or a construction) without
// breaking its span-capacity or tail-mass guarantees. required_dim carries
// sizing advice.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, int required_dim)
      : std::runtime_error(what), required_dim(required_dim) {}
  int required_dim;
};

// A solver that only works on quadratics detected a non-quadratic objective.
class UnsupportedObjectiveError : public std::runtime_error {
 public:
  explicit UnsupportedObjectiveError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ifobench
