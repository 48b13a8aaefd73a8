#pragma once

#include <iosfwd>
#include <string>

#include "ifobench/finite_sum.hpp"
#include "ifobench/vec.hpp"

namespace ifobench {

// Loss convention for the squared residual components.
//
//   Squared: g_i(x) = (<a_i,x> - b_i)^2      -> g_i'' = 2 a_i a_i^T, L = mu + 2R^2
//   Half:    g_i(x) = (<a_i,x> - b_i)^2 / 2  -> g_i'' = a_i a_i^T,   L = mu + R^2
//
// Half is the default: it keeps the textbook constant bookkeeping L = mu + R^2
// for rows on the radius-R sphere. rls_component() always reports the plain
// squared-loss pair regardless of the convention used to assemble a problem.
enum class RlsConvention { kHalf, kSquared };

std::string to_string(RlsConvention c);

// Synthetic regularized least-squares dataset with rows on a sphere.
struct RlsDataset {
  int n = 0;
  int d = 0;
  double R = 1.0;
  double mu = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  RlsConvention convention = RlsConvention::kHalf;
  std::vector<Point> rows;  // each of dimension d, norm R
  Point targets;            // length n
  Point planted;            // unit-norm generating vector, length d

  // Component smoothness bound under the chosen convention.
  double smoothness_L() const;
};

// Draws n rows i.i.d. uniform on the radius-R sphere and targets
// b_i = <a_i, xbar> + noise * xi_i with a fixed unit-norm planted xbar and
// standard normal xi. Fully reproducible from the seed.
RlsDataset sample_sphere_dataset(int n, int d, double R, double mu, double noise, std::uint64_t seed,
                                 RlsConvention convention = RlsConvention::kHalf);

// Plain squared-loss pair: value (<a_i,x> - b_i)^2, gradient 2(<a_i,x> - b_i) a_i.
ComponentEval rls_component(const RlsDataset& data, int i, const Point& x);

// Finite-sum view under the dataset's convention.
FiniteSumProblem rls_problem(const RlsDataset& data);

// Exact minimizer of the full objective via the dense normal equations.
Point rls_minimizer(const RlsDataset& data);

// Empirical second-moment matrix (factor/n) sum a_i a_i^T with factor 1
// (Half) or 2 (Squared), row-major d x d.
std::vector<double> rls_covariance(const RlsDataset& data);

// CSV: one row per example, a_{i,1..d} then b_i. The JSON header carries
// (n, d, R, mu, noise, seed, convention).
void write_rls_csv(const RlsDataset& data, std::ostream& out);
std::string rls_header_json(const RlsDataset& data);

}  // namespace ifobench
