#include "ifobench/resisting.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "ifobench/errors.hpp"

namespace ifobench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t fnv1a_hash(const Point& x) {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : x) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffull;
      h *= 1099511628211ull;
    }
  }
  return h;
}

// ln sqrt(sum_i exp(2 * ln_terms[i])) with -inf entries allowed
double log_norm_of_terms(const std::vector<double>& ln_terms) {
  double m = -kInf;
  for (double t : ln_terms) m = std::max(m, t);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double t : ln_terms) s += std::exp(2.0 * (t - m));
  return m + 0.5 * std::log(s);
}

double rel_defect(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace

ResistingState::ResistingState(double mu, double L, double gamma, int dim)
    : fn_(mu, L, gamma > 0.0 ? rho_for_norm(gamma, decay_rate(L / mu)) : 0.0, dim),
      gamma_(gamma),
      family_(dim) {
  if (gamma < 0.0) throw std::invalid_argument("ResistingState: gamma must be non-negative");
  const int required = 2 + min_dim_for_tail(fn_.q());
  if (dim < required)
    throw CapacityError("ResistingState: dim too small to answer even one query under the tail guard", required);
}

int ResistingState::max_unique_queries() const {
  return (fn_.dim() - min_dim_for_tail(fn_.q())) / 2;
}

const ResistingState::LogEntry* ResistingState::find_repeat(const Point& x, std::uint64_t hash) const {
  for (std::size_t idx = 0; idx < log_.size(); ++idx) {
    if (log_hashes_[idx] != hash) continue;
    if (log_[idx].x == x) return &log_[idx];
  }
  return nullptr;
}

ResistingState::Answer ResistingState::query(const Point& x) {
  if (static_cast<int>(x.size()) != fn_.dim())
    throw std::invalid_argument("ResistingState::query: dimension mismatch");
  if (!all_finite(x)) throw std::invalid_argument("ResistingState::query: non-finite query point");

  const std::uint64_t hash = fnv1a_hash(x);
  if (const LogEntry* repeat = find_repeat(x, hash)) {
    // Answers must agree with the final instance on every past point, so a
    // repeated point gets the recorded answer verbatim. The span does not
    // need to grow for it.
    ++total_queries_;
    size_history_.push_back(family_.size());
    return {repeat->value, repeat->grad};
  }

  const int next_unique = unique_queries() + 1;
  if (next_unique > max_unique_queries()) {
    const int required = 2 * next_unique + min_dim_for_tail(fn_.q());
    throw CapacityError("ResistingState::query: span capacity exhausted; increase dim to at least " +
                            std::to_string(required),
                        required);
  }

  // Extend the revealed span by the query point, then by one fresh canonical
  // direction outside it.
  family_.extend(x);
  bool added_fresh = false;
  while (cursor_ < fn_.dim()) {
    const bool grew = family_.extend(basis_vector(fn_.dim(), cursor_));
    ++cursor_;
    if (grew) {
      added_fresh = true;
      break;
    }
  }
  if (!added_fresh)
    throw CapacityError("ResistingState::query: no fresh direction available; increase dim",
                        2 * next_unique + min_dim_for_tail(fn_.q()));

  const Point coeffs = family_.transpose_apply_padded(x, fn_.dim());
  const double value = fn_.value(coeffs);
  const Point grad = family_.apply(fn_.gradient(coeffs));

  log_.push_back({x, value, grad, family_.size()});
  log_hashes_.push_back(hash);
  ++total_queries_;
  size_history_.push_back(family_.size());
  return {value, log_.back().grad};
}

double ResistingState::Finalization::value(const Point& x) const {
  return fn.value(basis.transpose_apply_padded(x, fn.dim()));
}

Point ResistingState::Finalization::gradient(const Point& x) const {
  return basis.apply(fn.gradient(basis.transpose_apply_padded(x, fn.dim())));
}

ResistingState::Finalization ResistingState::finalize(const Point& x_out,
                                                      std::optional<double> gamma_override) const {
  if (static_cast<int>(x_out.size()) != fn_.dim())
    throw std::invalid_argument("ResistingState::finalize: dimension mismatch");

  double gamma_eff = gamma_;
  NesterovFunction fn = fn_;
  if (gamma_override) {
    if (!log_.empty() && *gamma_override != gamma_)
      throw std::logic_error("ResistingState::finalize: hidden norm is committed once a query was answered");
    gamma_eff = *gamma_override;
    fn = NesterovFunction(fn_.mu(), fn_.L(), gamma_eff > 0.0 ? rho_for_norm(gamma_eff, fn_.q()) : 0.0, fn_.dim());
  }

  Finalization out{fn, family_, Point{}, family_.size(), -kInf, 0.0};
  out.basis.complete_canonical();

  const Point coeffs = fn.minimizer();
  // Contribution of the completion members to the minimizer: this is the
  // part of x* that the run never saw.
  Point tail_coeffs = coeffs;
  std::fill(tail_coeffs.begin(), tail_coeffs.begin() + out.span_size, 0.0);
  const Point hidden = out.basis.apply(tail_coeffs);

  // Of the two symmetric completions pick the one whose minimizer lies
  // farther from the produced output.
  const Point out_perp = sub(x_out, family_.project(x_out));
  if (dot(out_perp, hidden) > 0.0) out.basis.negate_members_from(out.span_size);
  out.minimizer = out.basis.apply(coeffs);

  if (gamma_eff > 0.0) {
    // dist(x*, revealed span)^2 = gamma^2 q^{2 span} (1 - q^{2(dim-span)})
    const double lq = std::log(fn.q());
    const double tail = std::exp(2.0 * (fn.dim() - out.span_size) * lq);
    out.ln_dist_to_span = std::log(gamma_eff) + out.span_size * lq + 0.5 * std::log1p(-tail);
  }

  for (const LogEntry& e : log_) {
    const Point c = out.basis.transpose_apply_padded(e.x, fn.dim());
    const double v = fn.value(c);
    const Point g = out.basis.apply(fn.gradient(c));
    double defect = rel_defect(v, e.value);
    defect = std::max(defect, norm(sub(g, e.grad)) / std::max(1.0, norm(e.grad)));
    out.max_answer_defect = std::max(out.max_answer_defect, defect);
  }
  return out;
}

ResistingSingleIfo::ResistingSingleIfo(double mu, double L, double gamma, int dim)
    : state_(mu, L, gamma, dim), transcript_(1) {
  if (gamma <= 0.0) throw std::invalid_argument("ResistingSingleIfo: gamma must be positive");
}

IfoAnswer ResistingSingleIfo::query(int i, const Point& x) {
  if (i != 0) throw std::invalid_argument("ResistingSingleIfo::query: index out of range");
  const ResistingState::Answer a = state_.query(x);
  const double value = a.value - 0.5 * mu() * norm2(x);
  Point grad = a.grad;
  axpy(-mu(), x, grad);
  transcript_.append(0, x, value, grad);
  return {value, grad};
}

ResistingSingleIfo::Finalized ResistingSingleIfo::finalize(const Point& x_out, const std::string& algo_name,
                                                           bool deterministic) {
  const long long K = transcript_.total_calls();
  auto fin = std::make_shared<ResistingState::Finalization>(state_.finalize(x_out));

  const double mu_v = mu();
  std::vector<Component> comps;
  comps.push_back([fin, mu_v](const Point& x) -> ComponentEval {
    const double v = fin->value(x) - 0.5 * mu_v * norm2(x);
    Point g = fin->gradient(x);
    axpy(-mu_v, x, g);
    return {v, std::move(g)};
  });
  auto problem = std::make_shared<FiniteSumProblem>(1, mu_v, L(), dim(), std::move(comps));
  problem->set_minimizer(fin->minimizer);

  Certificate cert;
  cert.kind = "resist-single";
  cert.algo = algo_name;
  cert.n = 1;
  cert.mu = mu_v;
  cert.L = L();
  cert.kappa = L() / mu_v;
  cert.kappa_c = cert.kappa;
  cert.q = state_.q();
  cert.gamma = state_.gamma();
  cert.total_calls = K;
  cert.per_component_calls = {K};
  cert.regime = "full";
  cert.status = deterministic ? CertStatus::kAsserted : CertStatus::kNotAssertedRandomized;
  cert.max_answer_defect = fin->max_answer_defect;
  cert.ln_dist_to_span = fin->ln_dist_to_span;

  const double observed = norm(sub(x_out, fin->minimizer)) / state_.gamma();
  const double ln_bound = 2.0 * static_cast<double>(K) * std::log(state_.q());
  const BoundCompare cmp = compare_to_bound(observed, ln_bound);
  cert.observed_rel_error = cmp.observed;
  cert.ln_observed = cmp.ln_observed;
  cert.bound_rel = cmp.bound;
  cert.ln_bound = cmp.ln_bound;
  cert.pass = cmp.pass;
  cert.jensen_ln_bound = ln_bound;
  cert.per_component_ln_dist = {fin->ln_dist_to_span};
  cert.per_component_ln_bound = {ln_bound};

  // Internal guarantee of the construction: the minimizer is at least
  // gamma q^{2K} away from everything the run revealed.
  if (fin->ln_dist_to_span < ln_bound + std::log1p(-1e-6)) {
    cert.pass = false;
    cert.note = "span-distance guarantee violated";
  }
  return {std::move(cert), std::move(problem)};
}

ResistingIfo::ResistingIfo(int n, double mu, double L, double gamma, int dim_per_component,
                           long long planned_budget)
    : n_(n), mu_(mu), L_(L), gamma_(gamma), dim_c_(dim_per_component),
      starved_(planned_budget < n), transcript_(n) {
  if (gamma <= 0.0) throw std::invalid_argument("ResistingIfo: gamma must be positive");
  if (planned_budget < 0) throw std::invalid_argument("ResistingIfo: planned budget must be non-negative");
  const HardInstanceParams p = hard_instance_params(n, mu, L);
  const double gamma_c = starved_ ? 0.0 : gamma / std::sqrt(static_cast<double>(n));
  states_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    states_.push_back(std::make_unique<ResistingState>(p.mu_c, p.L_c, gamma_c, dim_per_component));
}

double ResistingIfo::q_c() const { return states_.front()->q(); }

const ResistingState& ResistingIfo::component_state(int i) const {
  if (i < 0 || i >= n_) throw std::invalid_argument("ResistingIfo::component_state: index out of range");
  return *states_[static_cast<std::size_t>(i)];
}

IfoAnswer ResistingIfo::query(int i, const Point& x) {
  if (i < 0 || i >= n_) throw std::invalid_argument("ResistingIfo::query: index out of range");
  if (static_cast<int>(x.size()) != dim()) throw std::invalid_argument("ResistingIfo::query: dimension mismatch");
  if (!all_finite(x)) throw std::invalid_argument("ResistingIfo::query: non-finite query point");

  const Point xi = q_restrict(i, n_, x);
  const ResistingState::Answer a = states_[static_cast<std::size_t>(i)]->query(xi);
  const double mu_c = states_[static_cast<std::size_t>(i)]->mu();
  const double value = a.value - 0.5 * mu_c * norm2(xi);
  Point gc = a.grad;
  axpy(-mu_c, xi, gc);
  Point grad = q_embed(i, n_, gc);
  transcript_.append(i, x, value, grad);
  return {value, std::move(grad)};
}

ResistingIfo::Finalized ResistingIfo::finalize(const Point& x_out, const std::string& algo_name,
                                               bool deterministic) {
  if (static_cast<int>(x_out.size()) != dim())
    throw std::invalid_argument("ResistingIfo::finalize: dimension mismatch");
  const long long K = transcript_.total_calls();

  int starved_pick = -1;
  if (starved_) {
    for (int i = 0; i < n_; ++i)
      if (states_[static_cast<std::size_t>(i)]->total_queries() == 0) {
        starved_pick = i;
        break;
      }
    if (starved_pick < 0)
      throw std::logic_error("ResistingIfo::finalize: starved regime but every component was queried; "
                             "the planned budget was exceeded");
  }

  const HardInstanceParams p = hard_instance_params(n_, mu_, L_);
  auto fins = std::make_shared<std::vector<ResistingState::Finalization>>();
  fins->reserve(static_cast<std::size_t>(n_));
  Point xstar = zeros(dim());
  Certificate cert;
  for (int i = 0; i < n_; ++i) {
    const Point xi_out = q_restrict(i, n_, x_out);
    std::optional<double> norm_override;
    if (starved_ && i == starved_pick) norm_override = gamma_;
    fins->push_back(states_[static_cast<std::size_t>(i)]->finalize(xi_out, norm_override));
    axpy(1.0, q_embed(i, n_, fins->back().minimizer), xstar);

    const ResistingState& st = *states_[static_cast<std::size_t>(i)];
    const double gamma_i = (starved_ && i == starved_pick) ? gamma_ : st.gamma();
    const long long Ki = transcript_.component_calls(i);
    cert.per_component_calls.push_back(Ki);
    cert.per_component_ln_dist.push_back(fins->back().ln_dist_to_span);
    cert.per_component_ln_bound.push_back(
        gamma_i > 0.0 ? std::log(gamma_i) + 2.0 * static_cast<double>(Ki) * std::log(st.q()) : -kInf);
    cert.max_answer_defect = std::max(cert.max_answer_defect, fins->back().max_answer_defect);
  }

  const int n = n_;
  const double mu_c = p.mu_c;
  std::vector<Component> comps;
  comps.reserve(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    comps.push_back([fins, i, n, mu_c](const Point& x) -> ComponentEval {
      const Point xi = q_restrict(i, n, x);
      const ResistingState::Finalization& fin = (*fins)[static_cast<std::size_t>(i)];
      const double v = fin.value(xi) - 0.5 * mu_c * norm2(xi);
      Point gc = fin.gradient(xi);
      axpy(-mu_c, xi, gc);
      return {v, q_embed(i, n, gc)};
    });
  }
  auto problem = std::make_shared<FiniteSumProblem>(n_, mu_, L_, dim(), std::move(comps));
  problem->set_minimizer(xstar);

  cert.kind = "resist-ifo";
  cert.algo = algo_name;
  cert.n = n_;
  cert.mu = mu_;
  cert.L = L_;
  cert.kappa = L_ / mu_;
  cert.kappa_c = p.kappa_c;
  cert.q = p.q_c;
  cert.gamma = gamma_;
  cert.total_calls = K;
  cert.regime = starved_ ? "starved" : "full";
  cert.status = deterministic ? CertStatus::kAsserted : CertStatus::kNotAssertedRandomized;

  // Relative bound: gamma q^{2K/n} under the Jensen aggregation, gamma in
  // the starved regime (one unqueried component carries the full norm).
  double ln_bound = 0.0;
  if (!starved_) {
    ln_bound = (2.0 * static_cast<double>(K) / n_) * std::log(p.q_c);
    if (K < n_) cert.note = "K < n under the full regime; certifying gamma q^{2K/n} instead of gamma";
  }
  {
    // reference: ln of sqrt(sum_i gamma_i^2 q^{4 K_i}) / gamma
    std::vector<double> terms;
    for (int i = 0; i < n_; ++i) {
      const double lb = cert.per_component_ln_bound[static_cast<std::size_t>(i)];
      terms.push_back(lb == -kInf ? -kInf : lb);
    }
    const double agg = log_norm_of_terms(terms);
    cert.jensen_ln_bound = agg == -kInf ? -kInf : agg - std::log(gamma_);
  }

  const double observed = norm(sub(x_out, xstar)) / gamma_;
  const BoundCompare cmp = compare_to_bound(observed, ln_bound);
  cert.observed_rel_error = cmp.observed;
  cert.ln_observed = cmp.ln_observed;
  cert.bound_rel = cmp.bound;
  cert.ln_bound = cmp.ln_bound;
  cert.pass = cmp.pass;

  for (int i = 0; i < n_; ++i) {
    const double lb = cert.per_component_ln_bound[static_cast<std::size_t>(i)];
    if (lb != -kInf && cert.per_component_ln_dist[static_cast<std::size_t>(i)] < lb + std::log1p(-1e-6)) {
      cert.pass = false;
      cert.note = "span-distance guarantee violated for component " + std::to_string(i);
    }
  }
  return {std::move(cert), std::move(problem)};
}

}  // namespace ifobench
