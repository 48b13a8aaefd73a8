#include "ifobench/replay.hpp"

#include <exception>

namespace ifobench {

namespace {

struct Divergence {
  long long at;
};

class ReplayIfo : public Ifo {
 public:
  ReplayIfo(const Transcript& recorded, int n, double mu, double L, int dim)
      : recorded_(recorded), n_(n), mu_(mu), L_(L), dim_(dim), transcript_(n) {}

  int n() const override { return n_; }
  double mu() const override { return mu_; }
  double L() const override { return L_; }
  int dim() const override { return dim_; }

  IfoAnswer query(int i, const Point& x) override {
    const long long t = transcript_.total_calls();
    if (t >= recorded_.total_calls()) throw Divergence{t};
    const TranscriptEntry& e = recorded_.entries()[static_cast<std::size_t>(t)];
    if (e.component != i || e.x != x) throw Divergence{t};
    transcript_.append(i, x, e.value, e.grad);
    return {e.value, e.grad};
  }

  const Transcript& transcript() const override { return transcript_; }

 private:
  const Transcript& recorded_;
  int n_;
  double mu_, L_;
  int dim_;
  Transcript transcript_;
};

}  // namespace

ReplayResult transcript_replay_check(const SolverConfig& cfg, const Transcript& recorded,
                                     const Point& recorded_output, int n, double mu, double L, int dim) {
  ReplayIfo oracle(recorded, n, mu, L, dim);
  try {
    const RunTrace trace = run_solver(cfg, oracle);
    if (oracle.calls() != recorded.total_calls()) return {false, oracle.calls()};
    if (trace.final_iterate != recorded_output) return {false, recorded.total_calls()};
    return {true, -1};
  } catch (const Divergence& d) {
    return {false, d.at};
  }
}

}  // namespace ifobench
