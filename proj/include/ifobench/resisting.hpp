#pragma once

#include <memory>
#include <optional>

#include "ifobench/certificate.hpp"
#include "ifobench/finite_sum.hpp"
#include "ifobench/ifo.hpp"
#include "ifobench/nesterov.hpp"
#include "ifobench/ortho.hpp"

namespace ifobench {

// Adaptive first-order adversary for a single smooth strongly convex
// function. It answers queries as if a fixed chain quadratic were being
// evaluated in a hidden rotated basis, while building that basis one query
// at a time:
//
//   on query x: extend the orthonormal family S by x, then by one fresh
//   direction outside the current span; answer with the chain quadratic
//   applied to the coefficients S^T x (coordinates beyond the family act
//   as zero).
//
// All answers remain consistent with every function obtainable by completing
// S to a full basis, so the concrete instance can be chosen after the run.
// Fresh and completion directions come from the canonical basis in index
// order, which makes runs reproducible.
class ResistingState {
 public:
  struct Answer {
    double value;
    Point grad;
  };

  struct LogEntry {
    Point x;
    double value;
    Point grad;
    int family_size_after;
  };

  // gamma > 0 hides a minimizer of norm gamma (up to the truncation tail);
  // gamma == 0 is the zero-norm instance used while a component's norm
  // assignment is deferred.
  ResistingState(double mu, double L, double gamma, int dim);

  Answer query(const Point& x);

  double mu() const { return fn_.mu(); }
  double L() const { return fn_.L(); }
  double q() const { return fn_.q(); }
  double gamma() const { return gamma_; }
  int dim() const { return fn_.dim(); }
  long long total_queries() const { return total_queries_; }
  int unique_queries() const { return static_cast<int>(log_.size()); }
  // Largest number of distinct query points the dimension can absorb while
  // keeping the hidden tail below the guard.
  int max_unique_queries() const;

  const OrthonormalFamily& family() const { return family_; }
  const std::vector<LogEntry>& log() const { return log_; }
  const std::vector<int>& family_size_history() const { return size_history_; }

  // Completes the basis deterministically (choosing between the two
  // symmetric completions the one whose minimizer lies farther from x_out),
  // materializes the concrete quadratic and its minimizer, and verifies the
  // recorded answers against it.
  //
  // gamma_override reassigns the hidden norm; only legal while no query has
  // been answered (used for unqueried components).
  struct Finalization {
    NesterovFunction fn;
    OrthonormalFamily basis;  // full basis, sign-resolved
    Point minimizer;
    int span_size = 0;         // family size before completion
    double ln_dist_to_span = 0.0;  // analytic distance of the minimizer from the revealed span
    double max_answer_defect = 0.0;

    double value(const Point& x) const;
    Point gradient(const Point& x) const;
  };
  Finalization finalize(const Point& x_out, std::optional<double> gamma_override = {}) const;

 private:
  NesterovFunction fn_;
  double gamma_;
  OrthonormalFamily family_;
  int cursor_ = 0;  // next canonical index to try as a fresh direction
  long long total_queries_ = 0;
  std::vector<LogEntry> log_;
  std::vector<std::uint64_t> log_hashes_;
  std::vector<int> size_history_;

  const LogEntry* find_repeat(const Point& x, std::uint64_t hash) const;
};

// IFO view of the single-function adversary (n = 1): the component value is
// f(x) - mu/2 ||x||^2 and the component gradient f'(x) - mu x, matching the
// finite-sum decomposition with the strong convexity term held by the
// regularizer.
class ResistingSingleIfo : public Ifo {
 public:
  ResistingSingleIfo(double mu, double L, double gamma, int dim);

  int n() const override { return 1; }
  double mu() const override { return state_.mu(); }
  double L() const override { return state_.L(); }
  int dim() const override { return state_.dim(); }

  IfoAnswer query(int i, const Point& x) override;
  const Transcript& transcript() const override { return transcript_; }

  ResistingState& state() { return state_; }
  const ResistingState& state() const { return state_; }

  struct Finalized {
    Certificate certificate;
    std::shared_ptr<FiniteSumProblem> problem;  // concrete instance, minimizer attached
  };
  Finalized finalize(const Point& x_out, const std::string& algo_name, bool deterministic);

 private:
  ResistingState state_;
  Transcript transcript_;
};

// n-component adversary: query (i, x) routes the i-th interleaved coordinate
// block to an independent single-function adversary with the per-component
// constants (n mu, L - mu + n mu), and answers with the convex
// (L - mu)-smooth component
//
//   g_i(x) = f_i(Q_i^T x) - (n mu / 2) ||Q_i^T x||^2.
//
// Queries to one component reveal nothing about any other.
//
// The hidden norm allocation must be fixed before answers are issued, so the
// planned call budget selects the regime: with budget >= n every component
// hides norm gamma/sqrt(n) (Jensen-aggregated bound gamma q^{2K/n}); with
// budget < n all components start at zero norm and the full norm gamma is
// assigned to the lowest-index unqueried component at finalization (bound
// gamma).
class ResistingIfo : public Ifo {
 public:
  ResistingIfo(int n, double mu, double L, double gamma, int dim_per_component, long long planned_budget);

  int n() const override { return n_; }
  double mu() const override { return mu_; }
  double L() const override { return L_; }
  int dim() const override { return n_ * dim_c_; }

  IfoAnswer query(int i, const Point& x) override;
  const Transcript& transcript() const override { return transcript_; }

  double gamma() const { return gamma_; }
  double q_c() const;
  bool starved_regime() const { return starved_; }
  const ResistingState& component_state(int i) const;

  struct Finalized {
    Certificate certificate;
    std::shared_ptr<FiniteSumProblem> problem;
  };
  Finalized finalize(const Point& x_out, const std::string& algo_name, bool deterministic);

 private:
  int n_;
  double mu_, L_, gamma_;
  int dim_c_;
  bool starved_;
  std::vector<std::unique_ptr<ResistingState>> states_;
  Transcript transcript_;
};

}  // namespace ifobench
