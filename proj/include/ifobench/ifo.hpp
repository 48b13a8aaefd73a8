#pragma once

#include <cstdint>
#include <iosfwd>

#include "ifobench/finite_sum.hpp"
#include "ifobench/vec.hpp"

namespace ifobench {

// One answered oracle call.
struct TranscriptEntry {
  long long call_index;
  int component;
  Point x;
  double value;
  Point grad;
};

// Append-only record of all oracle calls of a run, with total and
// per-component call counts.
class Transcript {
 public:
  explicit Transcript(int n);

  int n() const { return n_; }
  long long total_calls() const { return static_cast<long long>(entries_.size()); }
  long long component_calls(int i) const;
  const std::vector<TranscriptEntry>& entries() const { return entries_; }

  void append(int component, const Point& x, double value, const Point& grad);

  // CSV columns: call_index, i, x_norm, value, g_norm.
  void write_csv(std::ostream& out) const;
  // Raw double sidecar with the full query and gradient vectors:
  // per entry [call_index, i, dim, x..., value, g...] as doubles.
  void write_binary_sidecar(std::ostream& out) const;

 private:
  int n_;
  std::vector<TranscriptEntry> entries_;
  std::vector<long long> per_component_;
};

struct IfoAnswer {
  double value;
  Point grad;
};

// Incremental first-order oracle: a query (i, x) reveals the value and
// gradient of component g_i only. Every query is recorded and counted.
// The public constants n, mu, L (and the ambient dimension) are known to
// algorithms; everything else about f must come through query().
class Ifo {
 public:
  virtual ~Ifo() = default;

  virtual int n() const = 0;
  virtual double mu() const = 0;
  virtual double L() const = 0;
  virtual int dim() const = 0;

  virtual IfoAnswer query(int i, const Point& x) = 0;

  virtual const Transcript& transcript() const = 0;
  long long calls() const { return transcript().total_calls(); }
};

// Oracle view of a fixed finite-sum problem.
class StaticIfo : public Ifo {
 public:
  explicit StaticIfo(const FiniteSumProblem& problem);

  int n() const override { return problem_.n(); }
  double mu() const override { return problem_.mu(); }
  double L() const override { return problem_.L(); }
  int dim() const override { return problem_.dim(); }

  IfoAnswer query(int i, const Point& x) override;
  const Transcript& transcript() const override { return transcript_; }

  const FiniteSumProblem& problem() const { return problem_; }

 private:
  const FiniteSumProblem& problem_;
  Transcript transcript_;
};

}  // namespace ifobench
