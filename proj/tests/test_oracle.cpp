#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ifobench/errors.hpp"
#include "ifobench/replay.hpp"
#include "ifobench/resisting.hpp"
#include "ifobench/solvers.hpp"
#include "test_support.hpp"

using namespace ifobench;
using ifobench::testing::second_difference;

TEST_CASE("static oracle counts every call") {
  const FiniteSumProblem prob = build_hard_instance(3, 1.0, 4.0, 1.0, hard_instance_params(3, 1.0, 4.0).min_dim + 4);
  StaticIfo oracle(prob);
  Rng rng(1);
  for (int m = 0; m < 12; ++m) {
    CHECK(oracle.calls() == m);
    oracle.query(m % 3, rng.normal_vector(prob.dim()));
  }
  CHECK(oracle.calls() == 12);
  CHECK(oracle.transcript().component_calls(0) == 4);
  CHECK_THROWS_AS(oracle.query(3, zeros(prob.dim())), std::invalid_argument);
}

TEST_CASE("component gradients at the origin stay in the first owned slots") {
  const int n = 4;
  const FiniteSumProblem prob = build_hard_instance(n, 1.0, 5.0, 1.0, hard_instance_params(n, 1.0, 5.0).min_dim + 4);
  StaticIfo oracle(prob);
  for (int i = 0; i < n; ++i) {
    const IfoAnswer a = oracle.query(i, zeros(prob.dim()));
    for (std::size_t j = 0; j < a.grad.size(); ++j) {
      if (a.grad[j] != 0.0) {
        // only the first two interleaved slots of component i may appear
        CHECK((j == static_cast<std::size_t>(i) || j == static_cast<std::size_t>(n + i)));
      }
    }
  }
}

TEST_CASE("adversary first answer at the origin") {
  const double mu = 1.0, L = 4.0, gamma = 1.0;
  const int dim = 64;
  ResistingState state(mu, L, gamma, dim);
  const auto a = state.query(zeros(dim));
  CHECK(a.value == 0.0);
  const double rho = rho_for_norm(gamma, state.q());
  // gradient is -(L-mu) rho / 4 times the first fresh direction (e_0)
  CHECK(a.grad[0] == doctest::Approx(-(L - mu) * rho / 4.0).epsilon(1e-14));
  for (std::size_t j = 1; j < a.grad.size(); ++j) CHECK(a.grad[j] == 0.0);
  CHECK(state.family().size() == 1);  // zero query contributes nothing
}

TEST_CASE("repeated query points get identical answers") {
  ResistingState state(1.0, 10.0, 1.0, 96);
  Rng rng(44);
  const Point x = rng.normal_vector(96);
  const auto a1 = state.query(x);
  const auto other = state.query(rng.normal_vector(96));
  (void)other;
  const auto a2 = state.query(x);
  CHECK(a1.value == a2.value);
  CHECK(a1.grad == a2.grad);
}

TEST_CASE("span growth is at most two per query") {
  ResistingState state(1.0, 10.0, 1.0, 128);
  Rng rng(45);
  for (int k = 0; k < 20; ++k) {
    state.query(rng.normal_vector(128));
    const auto& sizes = state.family_size_history();
    CHECK(sizes.back() <= 2 * (k + 1));
  }
}

TEST_CASE("answered gradients lie in the revealed span") {
  ResistingState state(1.0, 25.0, 1.0, 160);
  Rng rng(46);
  for (int k = 0; k < 12; ++k) state.query(rng.normal_vector(160));
  for (const auto& e : state.log())
    CHECK(state.family().dist_to_span(e.grad) <= 1e-10 * std::max(1.0, norm(e.grad)));
}

TEST_CASE("adversary capacity is guarded") {
  const double mu = 1.0, L = 4.0;
  const int buffer = min_dim_for_tail(decay_rate(L / mu));
  ResistingState state(mu, L, 1.0, buffer + 2);  // room for exactly one distinct query
  Rng rng(47);
  state.query(rng.normal_vector(buffer + 2));
  try {
    state.query(rng.normal_vector(buffer + 2));
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    CHECK(e.required_dim > buffer + 2);
  }
  CHECK_THROWS_AS(ResistingState(mu, L, 1.0, buffer + 1), CapacityError);
}

TEST_CASE("finalized instance reproduces every recorded answer") {
  ResistingState state(1.0, 30.0, 2.0, 200);
  Rng rng(48);
  for (int k = 0; k < 15; ++k) state.query(rng.normal_vector(200));
  const auto fin = state.finalize(rng.normal_vector(200));
  CHECK(fin.max_answer_defect <= 1e-9);
  CHECK(fin.basis.orthonormality_defect() <= 1e-10);

  // the mirrored completion is equally consistent with the transcript
  auto mirrored = fin;
  mirrored.basis.negate_members_from(fin.span_size);
  for (const auto& e : state.log()) {
    CHECK(std::abs(mirrored.value(e.x) - e.value) <= 1e-9 * std::max(1.0, std::abs(e.value)));
    CHECK(norm(sub(mirrored.gradient(e.x), e.grad)) <= 1e-9 * std::max(1.0, norm(e.grad)));
  }
}

TEST_CASE("finalize picks the completion farther from the output") {
  ResistingState state(1.0, 16.0, 1.0, 128);
  Rng rng(49);
  for (int k = 0; k < 6; ++k) state.query(rng.normal_vector(128));
  const Point probe = rng.normal_vector(128);
  const auto fin = state.finalize(probe);
  const auto fin_neg = state.finalize(scaled(probe, -1.0));
  CHECK(norm(sub(probe, fin.minimizer)) >= norm(sub(probe, fin_neg.minimizer)) - 1e-12);
}

TEST_CASE("single-oracle certificate for gradient descent") {
  const double mu = 1.0, L = 100.0;
  ResistingSingleIfo oracle(mu, L, 1.0, 256);
  SolverConfig cfg;
  cfg.name = "gd";
  cfg.budget = 20;
  TraceHooks hooks;
  hooks.keep_iterates = true;
  const RunTrace trace = run_gd(cfg, oracle, hooks);
  CHECK(trace.total_calls == 20);
  auto fin = oracle.finalize(trace.final_iterate, "gd", true);
  CHECK(fin.certificate.q == doctest::Approx(9.0 / 11.0).epsilon(1e-15));
  CHECK(fin.certificate.pass);
  CHECK(fin.certificate.status == CertStatus::kAsserted);
  CHECK(fin.certificate.max_answer_defect <= 1e-9);
  // observed error respects gamma q^{2K}
  CHECK(fin.certificate.ln_observed >= fin.certificate.ln_bound);
  // the materialized problem has the certified minimizer
  REQUIRE(fin.problem->minimizer());
  CHECK(norm(fin.problem->gradient(*fin.problem->minimizer())) <= 1e-7);
}

TEST_CASE("trivial certificates without queries") {
  ResistingSingleIfo oracle(1.0, 9.0, 1.0, 64);
  Rng rng(50);
  const Point arbitrary = rng.normal_vector(64);
  auto fin = oracle.finalize(arbitrary, "none", true);
  CHECK(fin.certificate.total_calls == 0);
  CHECK(fin.certificate.bound_rel == doctest::Approx(1.0).epsilon(1e-12));
  // the hidden norm can always be placed at distance gamma from the output
  CHECK(fin.certificate.observed_rel_error >= 1.0 - 1e-9);
  CHECK(fin.certificate.pass);
}

TEST_CASE("outputting zero never beats the bound") {
  ResistingSingleIfo oracle(1.0, 9.0, 1.0, 96);
  SolverConfig cfg;
  cfg.name = "gd";
  cfg.budget = 5;
  run_gd(cfg, oracle);
  auto fin = oracle.finalize(zeros(96), "zero", true);
  CHECK(fin.certificate.observed_rel_error >= fin.certificate.bound_rel - 1e-9);
  CHECK(fin.certificate.pass);
}

TEST_CASE("component isolation of the n-component adversary") {
  const int n = 4;
  ResistingIfo oracle(n, 1.0, 5.0, 1.0, 64, 100);
  Rng rng(51);
  const Point x = rng.normal_vector(oracle.dim());
  oracle.query(1, x);
  oracle.query(1, rng.normal_vector(oracle.dim()));
  CHECK(oracle.component_state(1).total_queries() == 2);
  for (const int j : {0, 2, 3}) {
    CHECK(oracle.component_state(j).total_queries() == 0);
    CHECK(oracle.component_state(j).family().size() == 0);
  }
}

TEST_CASE("single-component adversary matches the plain oracle up to the regularizer") {
  const double mu = 1.0, L = 6.0, gamma = 1.5;
  const int dim = 64;
  ResistingIfo ifo(1, mu, L, gamma, dim, 50);
  ResistingState plain(mu, L, gamma, dim);
  Rng rng(52);
  for (int k = 0; k < 8; ++k) {
    const Point x = rng.normal_vector(dim);
    const IfoAnswer a = ifo.query(0, x);
    const auto b = plain.query(x);
    CHECK(a.value + 0.5 * mu * norm2(x) == doctest::Approx(b.value).epsilon(1e-12));
    Point g = a.grad;
    axpy(mu, x, g);
    CHECK(norm(sub(g, b.grad)) <= 1e-12 * std::max(1.0, norm(b.grad)));
  }
}

TEST_CASE("n-component certificate under the jensen aggregation") {
  const int n = 4;
  const double mu = 1.0, L = 5.0, gamma = 1.0;
  const HardInstanceParams p = hard_instance_params(n, mu, L);
  ResistingIfo oracle(n, mu, L, gamma, p.min_dim + 30, 8 * n);
  SolverConfig cfg;
  cfg.name = "gd";
  cfg.budget = 8 * n;  // eight full passes: equal per-component budgets
  TraceHooks hooks;
  hooks.keep_iterates = true;
  const RunTrace trace = run_gd(cfg, oracle, hooks);
  auto fin = oracle.finalize(trace.final_iterate, "gd", true);
  const Certificate& cert = fin.certificate;
  CHECK(cert.regime == "full");
  CHECK(cert.kappa_c == doctest::Approx(p.kappa_c).epsilon(1e-15));
  CHECK(cert.ln_bound ==
        doctest::Approx(2.0 * static_cast<double>(cert.total_calls) / n * std::log(p.q_c)).epsilon(1e-12));
  // equal budgets make the jensen aggregate tight
  CHECK(cert.jensen_ln_bound == doctest::Approx(cert.ln_bound).epsilon(1e-10));
  CHECK(cert.pass);
  CHECK(cert.max_answer_defect <= 1e-9);
  // the materialized components keep the class membership
  Rng rng(53);
  for (int i = 0; i < n; ++i) {
    for (int rep = 0; rep < 5; ++rep) {
      const Point x = rng.normal_vector(fin.problem->dim());
      Point u = rng.normal_vector(fin.problem->dim());
      scale(u, 1.0 / norm(u));
      const double dd =
          second_difference([&](const Point& q) { return fin.problem->component(i, q).value; }, x, u);
      CHECK(dd >= -1e-8);
      CHECK(dd <= (L - mu) + 1e-8);
    }
  }
}

TEST_CASE("starved regime assigns the full norm to an unqueried component") {
  const int n = 4;
  const double gamma = 1.0;
  const HardInstanceParams p = hard_instance_params(n, 1.0, 5.0);
  ResistingIfo oracle(n, 1.0, 5.0, gamma, p.min_dim + 10, n - 1);
  CHECK(oracle.starved_regime());
  Rng rng(54);
  for (int i = 0; i < n - 1; ++i) oracle.query(i, rng.normal_vector(oracle.dim()));
  const Point output = rng.normal_vector(oracle.dim());
  auto fin = oracle.finalize(output, "probe", true);
  CHECK(fin.certificate.regime == "starved");
  CHECK(fin.certificate.ln_bound == 0.0);  // relative bound is gamma itself
  CHECK(fin.certificate.observed_rel_error >= 1.0 - 1e-9);
  CHECK(fin.certificate.pass);
  // the hidden minimizer lives entirely in the unqueried component
  REQUIRE(fin.problem->minimizer());
  const Point xstar = *fin.problem->minimizer();
  CHECK(std::abs(norm(q_restrict(n - 1, n, xstar)) - gamma) <= 1e-9 + gamma * std::pow(p.q_c, p.min_dim));
  for (int i = 0; i < n - 1; ++i) CHECK(norm(q_restrict(i, n, xstar)) == 0.0);
}

TEST_CASE("randomized solvers are measured but never asserted") {
  const int n = 3;
  const HardInstanceParams p = hard_instance_params(n, 1.0, 7.0);
  ResistingIfo oracle(n, 1.0, 7.0, 1.0, p.min_dim + 40, 30);
  SolverConfig cfg;
  cfg.name = "sgd";
  cfg.budget = 30;
  cfg.seed = 9;
  TraceHooks hooks;
  hooks.keep_iterates = true;
  const RunTrace trace = run_sgd(cfg, oracle, hooks);
  auto fin = oracle.finalize(trace.final_iterate, "sgd", solver_deterministic("sgd"));
  CHECK(fin.certificate.status == CertStatus::kNotAssertedRandomized);
  CHECK(to_string(fin.certificate.status) == "not-asserted-randomized");
  CHECK(fin.certificate.rollup_ok());
}

TEST_CASE("replay reproduces deterministic and seeded runs") {
  const FiniteSumProblem prob = build_hard_instance(3, 1.0, 6.0, 1.0, hard_instance_params(3, 1.0, 6.0).min_dim + 8);

  SolverConfig gd_cfg;
  gd_cfg.name = "gd";
  gd_cfg.budget = 30;
  StaticIfo gd_oracle(prob);
  const RunTrace gd_trace = run_gd(gd_cfg, gd_oracle);
  const ReplayResult gd_replay = transcript_replay_check(gd_cfg, gd_oracle.transcript(), gd_trace.final_iterate,
                                                         prob.n(), prob.mu(), prob.L(), prob.dim());
  CHECK(gd_replay.ok);
  CHECK(gd_replay.first_divergence == -1);

  SolverConfig sgd_cfg;
  sgd_cfg.name = "sgd";
  sgd_cfg.budget = 40;
  sgd_cfg.seed = 1234;
  StaticIfo sgd_oracle(prob);
  const RunTrace sgd_trace = run_sgd(sgd_cfg, sgd_oracle);
  CHECK(transcript_replay_check(sgd_cfg, sgd_oracle.transcript(), sgd_trace.final_iterate, prob.n(), prob.mu(),
                                prob.L(), prob.dim())
            .ok);

  // a different seed diverges, with the first differing call reported
  SolverConfig other = sgd_cfg;
  other.seed = 4321;
  const ReplayResult diverged = transcript_replay_check(other, sgd_oracle.transcript(), sgd_trace.final_iterate,
                                                        prob.n(), prob.mu(), prob.L(), prob.dim());
  CHECK_FALSE(diverged.ok);
  CHECK(diverged.first_divergence >= 0);
}

TEST_CASE("replay after adversarial finalization is bitwise") {
  ResistingSingleIfo oracle(1.0, 50.0, 1.0, 200);
  SolverConfig cfg;
  cfg.name = "agm";
  cfg.budget = 25;
  const RunTrace trace = run_agm(cfg, oracle);
  auto fin = oracle.finalize(trace.final_iterate, "agm", true);
  CHECK(fin.certificate.pass);
  const ReplayResult replay =
      transcript_replay_check(cfg, oracle.transcript(), trace.final_iterate, 1, 1.0, 50.0, 200);
  CHECK(replay.ok);
}

TEST_CASE("transcript csv shape") {
  ResistingSingleIfo oracle(1.0, 9.0, 1.0, 64);
  SolverConfig cfg;
  cfg.name = "gd";
  cfg.budget = 3;
  run_gd(cfg, oracle);
  std::ostringstream out;
  oracle.transcript().write_csv(out);
  const std::string csv = out.str();
  CHECK(csv.rfind("call_index,i,x_norm,value,g_norm\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 calls

  // the binary sidecar carries the full vectors: per call
  // [index, i, dim, x..., value, g...] as doubles
  std::ostringstream bin(std::ios::binary);
  oracle.transcript().write_binary_sidecar(bin);
  const std::size_t per_entry = (3 + 64 + 1 + 64) * sizeof(double);
  CHECK(bin.str().size() == 3 * per_entry);
}
