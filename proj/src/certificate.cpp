#include "ifobench/certificate.hpp"

#include <cmath>

#include <json.hpp>

namespace ifobench {

BoundCompare compare_to_bound(double observed, double ln_bound) {
  BoundCompare c;
  c.observed = observed;
  c.ln_observed = observed > 0.0 ? std::log(observed) : -std::numeric_limits<double>::infinity();
  c.ln_bound = ln_bound;
  c.bound = ln_bound > std::log(1e-300) ? std::exp(ln_bound) : 0.0;
  const bool linear_ok = c.bound > 0.0 && observed >= c.bound - 1e-9;
  const bool log_ok = c.ln_observed >= ln_bound + std::log1p(-1e-6);
  c.pass = linear_ok || log_ok;
  return c;
}

std::string to_string(CertStatus s) {
  return s == CertStatus::kAsserted ? "asserted" : "not-asserted-randomized";
}

std::string Certificate::to_json(int indent) const {
  nlohmann::json j;
  j["kind"] = kind;
  j["algo"] = algo;
  j["n"] = n;
  j["mu"] = mu;
  j["L"] = L;
  j["kappa"] = kappa;
  j["kappa_c"] = kappa_c;
  j["q"] = q;
  j["gamma"] = gamma;
  j["total_calls"] = total_calls;
  j["per_component_calls"] = per_component_calls;
  j["observed_rel_error"] = observed_rel_error;
  j["ln_observed"] = ln_observed;
  j["bound_rel"] = bound_rel;
  j["ln_bound"] = ln_bound;
  j["pass"] = pass;
  j["status"] = to_string(status);
  j["replay_verified"] = replay_verified;
  j["max_answer_defect"] = max_answer_defect;
  j["ln_dist_to_span"] = ln_dist_to_span;
  j["per_component_ln_dist"] = per_component_ln_dist;
  j["per_component_ln_bound"] = per_component_ln_bound;
  j["jensen_ln_bound"] = jensen_ln_bound;
  j["regime"] = regime;
  j["note"] = note;
  return j.dump(indent);
}

}  // namespace ifobench
