#pragma once

#include <string>

namespace ifobench {

// Worst-case geometric rate for a finite sum of n components with surrogate
// condition number kappa = L/mu:
//
//   q = (sqrt(1 + (kappa-1)/n) - 1) / (sqrt(1 + (kappa-1)/n) + 1).
//
// n = 1 reduces to the classic (sqrt(kappa)-1)/(sqrt(kappa)+1).
double rate_q(double kappa, int n);

struct BoundValue {
  double value;      // 0.0 when the log value underflows the double range
  double log_value;  // always meaningful (-inf only for kappa == 1, K >= n)
};

// Adversarial error floor after K IFO calls: gamma for K < n, otherwise
// gamma q^{2K/n}. Non-increasing in K.
BoundValue lower_bound_curve(double gamma, double kappa, int n, long long K);

struct CallBounds {
  long long K_exact;       // max(n, ceil(n ln(1/eps) / (2 ln(1/q)))): where the curve crosses eps
  long long K_asymptotic;  // n + ceil(sqrt(n (kappa-1)) / 2 * ln(1/eps))
};

// Call counts needed to force the relative error below eps. The two forms
// agree up to a bounded mutual ratio (see magic_bound_margin).
CallBounds lower_bound_calls(int n, double kappa, double eps);

// Positive margin of the logarithmic rate bound,
//   log((sqrt(x)-1)/(sqrt(x)+1)) + 2/sqrt(x-1)  >  0   for all x > 1,
// evaluated cancellation-free via log1p. Tends to 0 from above as x grows.
double magic_bound_margin(double x);

struct RateReport {
  double kappa = 0.0;
  int n = 1;
  double kappa_c = 0.0;  // 1 + (kappa-1)/n
  double q = 0.0;
  double log_q = 0.0;
  double gamma = 1.0;
};

RateReport make_rate_report(double kappa, int n, double gamma);
std::string rate_report_json(const RateReport& r, int indent = 2);

}  // namespace ifobench
