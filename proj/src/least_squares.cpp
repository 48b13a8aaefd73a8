#include "ifobench/least_squares.hpp"

#include <memory>
#include <ostream>
#include <stdexcept>

#include "ifobench/linsolve.hpp"

#include <json.hpp>

namespace ifobench {

std::string to_string(RlsConvention c) { return c == RlsConvention::kHalf ? "half" : "squared"; }

double RlsDataset::smoothness_L() const {
  const double factor = convention == RlsConvention::kHalf ? 1.0 : 2.0;
  return mu + factor * R * R;
}

RlsDataset sample_sphere_dataset(int n, int d, double R, double mu, double noise, std::uint64_t seed,
                                 RlsConvention convention) {
  if (n < 1 || d < 1) throw std::invalid_argument("sample_sphere_dataset: n and d must be positive");
  if (R <= 0.0) throw std::invalid_argument("sample_sphere_dataset: R must be positive");
  if (mu <= 0.0) throw std::invalid_argument("sample_sphere_dataset: mu must be positive");
  if (noise < 0.0) throw std::invalid_argument("sample_sphere_dataset: noise must be non-negative");

  RlsDataset data;
  data.n = n;
  data.d = d;
  data.R = R;
  data.mu = mu;
  data.noise = noise;
  data.seed = seed;
  data.convention = convention;

  Rng rng(seed);
  data.planted = rng.sphere_vector(d, 1.0);
  data.rows.reserve(static_cast<std::size_t>(n));
  data.targets.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    data.rows.push_back(rng.sphere_vector(d, R));
    data.targets[static_cast<std::size_t>(i)] = dot(data.rows.back(), data.planted) + noise * rng.next_normal();
  }
  return data;
}

ComponentEval rls_component(const RlsDataset& data, int i, const Point& x) {
  if (i < 0 || i >= data.n) throw std::invalid_argument("rls_component: index out of range");
  const Point& a = data.rows[static_cast<std::size_t>(i)];
  if (x.size() != a.size()) throw std::invalid_argument("rls_component: dimension mismatch");
  const double r = dot(a, x) - data.targets[static_cast<std::size_t>(i)];
  return {r * r, scaled(a, 2.0 * r)};
}

FiniteSumProblem rls_problem(const RlsDataset& data) {
  // components co-own a copy so the problem outlives the caller's dataset
  const auto shared = std::make_shared<const RlsDataset>(data);
  const double half = data.convention == RlsConvention::kHalf ? 0.5 : 1.0;
  std::vector<Component> comps;
  comps.reserve(static_cast<std::size_t>(data.n));
  for (int i = 0; i < data.n; ++i) {
    comps.push_back([shared, i, half](const Point& x) -> ComponentEval {
      ComponentEval e = rls_component(*shared, i, x);
      e.value *= half;
      scale(e.grad, half);
      return e;
    });
  }
  FiniteSumProblem problem(data.n, data.mu, data.smoothness_L(), data.d, std::move(comps));
  problem.set_minimizer(rls_minimizer(data));
  return problem;
}

std::vector<double> rls_covariance(const RlsDataset& data) {
  const double factor = (data.convention == RlsConvention::kHalf ? 1.0 : 2.0) / data.n;
  std::vector<double> cov(static_cast<std::size_t>(data.d) * data.d, 0.0);
  for (const Point& a : data.rows)
    for (int r = 0; r < data.d; ++r)
      for (int c = 0; c < data.d; ++c)
        cov[static_cast<std::size_t>(r) * data.d + c] += factor * a[static_cast<std::size_t>(r)] * a[static_cast<std::size_t>(c)];
  return cov;
}

Point rls_minimizer(const RlsDataset& data) {
  // (mu I + factor/n sum a a^T) x = factor/n sum b a
  const double factor = (data.convention == RlsConvention::kHalf ? 1.0 : 2.0) / data.n;
  std::vector<double> a = rls_covariance(data);
  for (int i = 0; i < data.d; ++i) a[static_cast<std::size_t>(i) * data.d + i] += data.mu;
  Point rhs = zeros(data.d);
  for (int i = 0; i < data.n; ++i)
    axpy(factor * data.targets[static_cast<std::size_t>(i)], data.rows[static_cast<std::size_t>(i)], rhs);
  return dense_spd_solve(std::move(a), data.d, rhs);
}

void write_rls_csv(const RlsDataset& data, std::ostream& out) {
  for (int i = 0; i < data.n; ++i) {
    const Point& a = data.rows[static_cast<std::size_t>(i)];
    for (double v : a) out << fmt_double(v) << ',';
    out << fmt_double(data.targets[static_cast<std::size_t>(i)]) << '\n';
  }
}

std::string rls_header_json(const RlsDataset& data) {
  nlohmann::json j;
  j["n"] = data.n;
  j["d"] = data.d;
  j["R"] = data.R;
  j["mu"] = data.mu;
  j["noise"] = data.noise;
  j["seed"] = data.seed;
  j["convention"] = to_string(data.convention);
  return j.dump(2);
}

}  // namespace ifobench
