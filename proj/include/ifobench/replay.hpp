#pragma once

#include "ifobench/ifo.hpp"
#include "ifobench/solvers.hpp"

namespace ifobench {

struct ReplayResult {
  bool ok;
  long long first_divergence;  // -1 when ok
};

// Determinism check for a certified run: re-executes the solver against the
// finalized concrete problem, where the recorded transcript serves as the
// problem's oracle on the recorded trajectory (finalization separately
// verifies that the recorded answers match the materialized instance). A
// deterministic (or identically seeded) solver must reproduce every query,
// every answer and the final output bitwise; the first differing call index
// is reported otherwise.
ReplayResult transcript_replay_check(const SolverConfig& cfg, const Transcript& recorded,
                                     const Point& recorded_output, int n, double mu, double L, int dim);

}  // namespace ifobench
