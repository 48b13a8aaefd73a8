#pragma once

#include <string>
#include <vector>

#include "ifobench/least_squares.hpp"

namespace ifobench {

// Batch-complexity prefactors (full passes to reach eps, with the common
// log(1/eps) factor removed).
double gamma_asdca(double kappa, int n);          // 1 + sqrt((kappa-1)/n)
double gamma_sag(double L, double mu_f, int n);   // 1 + L/(mu_f n)
double gamma_agm(double L_f, double mu_f);        // sqrt(L_f/mu_f)

struct SpectrumReport {
  double mu_f;      // smallest eigenvalue of mu I + Sigma_hat
  double L_f;       // largest eigenvalue
  double kappa_f;   // L_f / mu_f
};

// Extremes of mu I + Sigma_hat for the dataset's empirical second-moment
// matrix (convention factor included, see rls_covariance).
SpectrumReport empirical_spectrum(const RlsDataset& data);

struct ConcentrationReport {
  bool satisfied;
  double lhs;  // c^2 d/n + C^2 log(d/delta)/n
  double rhs;  // 1/(8 kappa_f^2)
  double z;    // c sqrt(d/n) + C sqrt(log(2/delta)/n)
};

// Sample-size sufficiency condition for the spectrum estimates. Note the two
// different logarithm arguments: z carries log(2/delta) while the
// sufficiency threshold carries log(d/delta); both are evaluated as stated
// at their respective sites.
ConcentrationReport concentration_check(int d, long long n, double delta, double c, double C, double kappa_f);

struct ProblemStats {
  int n;
  double mu;
  double L;
  double mu_f;
  double L_f;
};

struct ComplexityReport {
  double gamma_asdca = 0.0;
  double gamma_sag = 0.0;
  double gamma_agm = 0.0;
  double kappa_f = 0.0;
  double mu_f = 0.0;
  double L_f = 0.0;
  std::string regime_label;                 // "kappa=O(n)" or "kappa>>n"
  std::vector<std::string> predicted_order;  // methods by ascending prefactor
  std::string note;
};

// All three prefactors plus the regime label (kappa <= 4n counts as
// "kappa=O(n)"; the label is descriptive only).
ComplexityReport regime_table(const ProblemStats& stats);

std::string complexity_report_json(const ComplexityReport& r, int indent = 2);
// Fixed-width table: one row per method, prefactor and per-regime entry.
std::string complexity_table_text(const ComplexityReport& r);

}  // namespace ifobench
