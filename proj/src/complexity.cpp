#include "ifobench/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "ifobench/linsolve.hpp"

namespace ifobench {

double gamma_asdca(double kappa, int n) {
  if (kappa < 1.0) throw std::domain_error("gamma_asdca: kappa must be >= 1");
  if (n < 1) throw std::domain_error("gamma_asdca: n must be >= 1");
  return 1.0 + std::sqrt((kappa - 1.0) / n);
}

double gamma_sag(double L, double mu_f, int n) {
  if (L <= 0.0 || mu_f <= 0.0) throw std::domain_error("gamma_sag: constants must be positive");
  if (n < 1) throw std::domain_error("gamma_sag: n must be >= 1");
  return 1.0 + L / (mu_f * n);
}

double gamma_agm(double L_f, double mu_f) {
  if (L_f <= 0.0 || mu_f <= 0.0) throw std::domain_error("gamma_agm: constants must be positive");
  if (L_f < mu_f) throw std::domain_error("gamma_agm: L_f must be >= mu_f");
  return std::sqrt(L_f / mu_f);
}

SpectrumReport empirical_spectrum(const RlsDataset& data) {
  if (data.n < 1) throw std::invalid_argument("empirical_spectrum: empty dataset");
  std::vector<double> m = rls_covariance(data);
  for (int i = 0; i < data.d; ++i) m[static_cast<std::size_t>(i) * data.d + i] += data.mu;
  const std::vector<double> cov = m;  // keep a copy for the operator closure
  const int d = data.d;
  const auto [lo, hi] = extreme_eigs_sym(
      [&cov, d](const Point& x) {
        Point y = zeros(d);
        for (int r = 0; r < d; ++r) {
          double acc = 0.0;
          for (int c = 0; c < d; ++c) acc += cov[static_cast<std::size_t>(r) * d + c] * x[static_cast<std::size_t>(c)];
          y[static_cast<std::size_t>(r)] = acc;
        }
        return y;
      },
      d);
  return {lo, hi, hi / lo};
}

ConcentrationReport concentration_check(int d, long long n, double delta, double c, double C, double kappa_f) {
  if (d < 1 || n < 1) throw std::domain_error("concentration_check: d and n must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("concentration_check: delta must lie in (0,1)");
  if (c <= 0.0 || C <= 0.0 || kappa_f <= 0.0)
    throw std::domain_error("concentration_check: constants must be positive");
  ConcentrationReport r;
  const double nn = static_cast<double>(n);
  r.lhs = c * c * d / nn + C * C * std::log(d / delta) / nn;
  r.rhs = 1.0 / (8.0 * kappa_f * kappa_f);
  r.z = c * std::sqrt(d / nn) + C * std::sqrt(std::log(2.0 / delta) / nn);
  r.satisfied = r.lhs <= r.rhs;
  return r;
}

ComplexityReport regime_table(const ProblemStats& stats) {
  if (stats.mu <= 0.0 || stats.L <= stats.mu) throw std::invalid_argument("regime_table: need 0 < mu < L");
  if (stats.mu_f <= 0.0 || stats.L_f < stats.mu_f)
    throw std::invalid_argument("regime_table: need 0 < mu_f <= L_f");
  ComplexityReport r;
  const double kappa = stats.L / stats.mu;
  r.gamma_asdca = gamma_asdca(kappa, stats.n);
  r.gamma_sag = gamma_sag(stats.L, stats.mu_f, stats.n);
  r.gamma_agm = gamma_agm(stats.L_f, stats.mu_f);
  r.mu_f = stats.mu_f;
  r.L_f = stats.L_f;
  r.kappa_f = stats.L_f / stats.mu_f;
  r.regime_label = kappa <= 4.0 * stats.n ? "kappa=O(n)" : "kappa>>n";

  std::vector<std::pair<std::string, double>> order = {
      {"asdca", r.gamma_asdca}, {"sag", r.gamma_sag}, {"agm", r.gamma_agm}};
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  for (const auto& [name, value] : order) r.predicted_order.push_back(name);
  if (stats.n == 1) {
    r.predicted_order.clear();
    r.note = "n = 1: prefactors reported without an ordering claim";
  }
  return r;
}

std::string complexity_report_json(const ComplexityReport& r, int indent) {
  nlohmann::json j;
  j["gamma_asdca"] = r.gamma_asdca;
  j["gamma_sag"] = r.gamma_sag;
  j["gamma_agm"] = r.gamma_agm;
  j["kappa_f"] = r.kappa_f;
  j["mu_f"] = r.mu_f;
  j["L_f"] = r.L_f;
  j["regime_label"] = r.regime_label;
  j["predicted_order"] = r.predicted_order;
  j["note"] = r.note;
  return j.dump(indent);
}

std::string complexity_table_text(const ComplexityReport& r) {
  char buf[128];
  std::string out;
  out += "method   prefactor      regime\n";
  out += "------   ---------      ------\n";
  std::snprintf(buf, sizeof buf, "%-8s %-14.6g %s\n", "asdca", r.gamma_asdca, r.regime_label.c_str());
  out += buf;
  std::snprintf(buf, sizeof buf, "%-8s %-14.6g %s\n", "sag", r.gamma_sag, r.regime_label.c_str());
  out += buf;
  std::snprintf(buf, sizeof buf, "%-8s %-14.6g %s\n", "agm", r.gamma_agm, r.regime_label.c_str());
  out += buf;
  return out;
}

}  // namespace ifobench
