#include "ifobench/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace ifobench {

double rate_q(double kappa, int n) {
  if (kappa < 1.0) throw std::domain_error("rate_q: kappa must be >= 1");
  if (n < 1) throw std::domain_error("rate_q: n must be >= 1");
  const double r = std::sqrt(1.0 + (kappa - 1.0) / n);
  return (r - 1.0) / (r + 1.0);
}

BoundValue lower_bound_curve(double gamma, double kappa, int n, long long K) {
  if (gamma <= 0.0) throw std::domain_error("lower_bound_curve: gamma must be positive");
  if (K < 0) throw std::domain_error("lower_bound_curve: K must be non-negative");
  const double q = rate_q(kappa, n);
  double log_value = std::log(gamma);
  if (K >= n) {
    if (q == 0.0)
      log_value = -std::numeric_limits<double>::infinity();
    else
      log_value += (2.0 * static_cast<double>(K) / n) * std::log(q);
  }
  const double value = log_value > std::log(1e-300) ? std::exp(log_value) : 0.0;
  return {value, log_value};
}

CallBounds lower_bound_calls(int n, double kappa, double eps) {
  if (n < 1) throw std::domain_error("lower_bound_calls: n must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("lower_bound_calls: eps must lie in (0,1)");
  if (kappa < 1.0) throw std::domain_error("lower_bound_calls: kappa must be >= 1");
  if (kappa == 1.0) return {n, n};

  const double q = rate_q(kappa, n);
  const double log_inv_eps = std::log(1.0 / eps);
  const double exact = n * log_inv_eps / (2.0 * std::log(1.0 / q));
  const double asym = std::sqrt(static_cast<double>(n) * (kappa - 1.0)) / 2.0 * log_inv_eps;
  CallBounds b;
  b.K_exact = std::max<long long>(n, static_cast<long long>(std::ceil(exact)));
  b.K_asymptotic = n + static_cast<long long>(std::ceil(asym));
  return b;
}

double magic_bound_margin(double x) {
  if (!(x > 1.0)) throw std::domain_error("magic_bound_margin: x must exceed 1");
  // log((sqrt(x)-1)/(sqrt(x)+1)) = log1p(-2/(sqrt(x)+1)), cancellation-free
  return std::log1p(-2.0 / (std::sqrt(x) + 1.0)) + 2.0 / std::sqrt(x - 1.0);
}

RateReport make_rate_report(double kappa, int n, double gamma) {
  RateReport r;
  r.kappa = kappa;
  r.n = n;
  r.kappa_c = 1.0 + (kappa - 1.0) / n;
  r.q = rate_q(kappa, n);
  r.log_q = r.q > 0.0 ? std::log(r.q) : -std::numeric_limits<double>::infinity();
  r.gamma = gamma;
  return r;
}

std::string rate_report_json(const RateReport& r, int indent) {
  nlohmann::json j;
  j["kappa"] = r.kappa;
  j["n"] = r.n;
  j["kappa_c"] = r.kappa_c;
  j["q"] = r.q;
  j["log_q"] = r.log_q;
  j["gamma"] = r.gamma;
  return j.dump(indent);
}

}  // namespace ifobench
