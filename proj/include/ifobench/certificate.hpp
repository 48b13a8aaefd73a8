#pragma once

#include <string>
#include <vector>

namespace ifobench {

// Outcome of comparing an observed relative error against a theoretical
// lower-bound value that may underflow the linear double range.
//
// The comparison passes when either
//   observed >= bound - 1e-9            (linear, when the bound is
//                                        representable above 1e-300), or
//   ln(observed) >= ln(bound) + ln(1 - 1e-6)   (log domain),
// so tiny bounds are handled entirely in logs.
struct BoundCompare {
  double observed;
  double ln_observed;
  double bound;     // exp(ln_bound), 0.0 on underflow
  double ln_bound;
  bool pass;
};

BoundCompare compare_to_bound(double observed, double ln_bound);

enum class CertStatus {
  kAsserted,                // deterministic run; the bound claim is asserted
  kNotAssertedRandomized,   // randomized solver; measured only, never failed
};

std::string to_string(CertStatus s);

// Machine-checked record that an algorithm's output respects the adversarial
// lower bound on the finalized instance. All bound values are relative to
// gamma and carried in both linear and log form.
struct Certificate {
  std::string kind;  // "resist-single" | "resist-ifo"
  std::string algo;
  int n = 1;
  double mu = 0.0, L = 0.0, kappa = 0.0;
  double kappa_c = 0.0, q = 0.0;  // per-component condition number and rate
  double gamma = 0.0;
  long long total_calls = 0;
  std::vector<long long> per_component_calls;

  double observed_rel_error = 0.0;
  double ln_observed = 0.0;
  double bound_rel = 0.0;
  double ln_bound = 0.0;
  bool pass = false;
  CertStatus status = CertStatus::kAsserted;
  bool replay_verified = false;

  // diagnostics
  double max_answer_defect = 0.0;  // finalized f vs recorded answers, relative
  double ln_dist_to_span = 0.0;    // analytic; single-oracle runs
  std::vector<double> per_component_ln_dist;
  std::vector<double> per_component_ln_bound;
  double jensen_ln_bound = 0.0;  // ln sqrt(sum gamma_i^2 q^{4 K_i})
  std::string regime;            // "full" | "starved"
  std::string note;

  // Effective pass for rollups: asserted certificates must pass; measured-only
  // ones never fail a suite.
  bool rollup_ok() const { return status != CertStatus::kAsserted || pass; }

  std::string to_json(int indent = 2) const;
};

}  // namespace ifobench
