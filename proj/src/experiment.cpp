#include "ifobench/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ifobench/replay.hpp"
#include "ifobench/resisting.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ifobench {

namespace {

const std::vector<std::string> kKinds = {"hard-static", "resist-single", "resist-ifo", "rls", "bounds-table"};

bool known_kind(const std::string& k) {
  for (const std::string& s : kKinds)
    if (s == k) return true;
  return false;
}

RlsConvention parse_convention(const std::string& s) {
  return s == "squared" ? RlsConvention::kSquared : RlsConvention::kHalf;
}

}  // namespace

ParseResult parse_config(const std::string& text) {
  ParseResult out;
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    out.errors.push_back(std::string("invalid JSON: ") + e.what());
    return out;
  }
  if (!j.is_object()) {
    out.errors.push_back("config must be a JSON object");
    return out;
  }

  ExperimentConfig cfg;
  auto err = [&](const std::string& path, const std::string& msg) { out.errors.push_back(path + ": " + msg); };

  if (!j.contains("kind") || !j["kind"].is_string()) {
    err("kind", "required string field");
  } else {
    cfg.kind = j["kind"].get<std::string>();
    if (!known_kind(cfg.kind)) err("kind", "unknown experiment kind '" + cfg.kind + "'");
  }

  std::optional<double> kappa_given;
  bool L_given = false;
  if (j.contains("instance")) {
    const json& inst = j["instance"];
    if (!inst.is_object()) {
      err("instance", "must be an object");
    } else {
      auto num = [&](const char* key, double& slot, bool& present) {
        present = inst.contains(key);
        if (!present) return;
        if (!inst[key].is_number()) {
          err(std::string("instance.") + key, "must be a number");
          present = false;
          return;
        }
        slot = inst[key].get<double>();
      };
      bool present = false;
      double tmp = 0.0;
      num("mu", cfg.mu, present);
      num("L", tmp, L_given);
      if (L_given) cfg.L = tmp;
      num("gamma", cfg.gamma, present);
      num("R", cfg.R, present);
      num("noise", cfg.noise, present);
      double kappa_tmp = 0.0;
      bool kappa_present = false;
      num("kappa", kappa_tmp, kappa_present);
      if (kappa_present) kappa_given = kappa_tmp;
      if (inst.contains("n")) {
        if (!inst["n"].is_number_integer() || inst["n"].get<long long>() < 1)
          err("instance.n", "must be a positive integer");
        else
          cfg.n = inst["n"].get<int>();
      }
      auto dim_field = [&](const char* key, int& slot) {
        if (!inst.contains(key)) return;
        if (!inst[key].is_number_integer() || inst[key].get<long long>() < 1)
          err(std::string("instance.") + key, "must be a positive integer");
        else
          slot = inst[key].get<int>();
      };
      dim_field("component_dim", cfg.component_dim);
      dim_field("dim", cfg.dim);
      dim_field("d", cfg.d);
      if (inst.contains("seed")) {
        if (!inst["seed"].is_number_integer())
          err("instance.seed", "must be an integer");
        else
          cfg.data_seed = inst["seed"].get<std::uint64_t>();
      }
      if (inst.contains("convention")) {
        const std::string c = inst["convention"].is_string() ? inst["convention"].get<std::string>() : "";
        if (c != "half" && c != "squared")
          err("instance.convention", "must be 'half' or 'squared'");
        else
          cfg.convention = c;
      }
    }
  }

  if (cfg.mu <= 0.0) err("instance.mu", "must be positive");
  if (kappa_given && L_given) {
    const double implied = cfg.mu * *kappa_given;
    if (std::abs(implied - cfg.L) > 1e-9 * std::max(1.0, std::abs(cfg.L)))
      err("instance.kappa", "inconsistent with instance.L: kappa*mu = " + fmt_double(implied) + " but L = " +
                                fmt_double(cfg.L));
  } else if (kappa_given) {
    if (*kappa_given <= 1.0)
      err("instance.kappa", "must exceed 1");
    else
      cfg.L = cfg.mu * *kappa_given;
  }
  if (cfg.kind == "rls" && cfg.mu > 0.0 && cfg.R > 0.0) {
    // component smoothness is structural for the sphere dataset
    const double factor = cfg.convention == "squared" ? 2.0 : 1.0;
    const double derived = cfg.mu + factor * cfg.R * cfg.R;
    if (!L_given && !kappa_given)
      cfg.L = derived;
    else if (std::abs(cfg.L - derived) > 1e-9 * derived)
      err("instance.L", "inconsistent with mu + R^2 under the '" + cfg.convention + "' convention (expected " +
                            fmt_double(derived) + ")");
  }
  const bool needs_instance = cfg.kind != "" && cfg.kind != "bounds-table";
  if (cfg.kind == "bounds-table" && !L_given && !kappa_given) err("instance.kappa", "required for bounds-table");
  if (needs_instance || L_given || kappa_given) {
    if (cfg.L <= cfg.mu && (L_given || kappa_given || needs_instance))
      err("instance.L", "must exceed mu (give L or kappa)");
  }
  if (cfg.gamma <= 0.0) err("instance.gamma", "must be positive");
  if (cfg.kind == "hard-static" || cfg.kind == "resist-ifo") {
    if (cfg.component_dim < 1) err("instance.component_dim", "required positive integer for this kind");
  }
  if (cfg.kind == "resist-single") {
    if (cfg.dim < 1) err("instance.dim", "required positive integer for this kind");
    if (cfg.n != 1) err("instance.n", "must be 1 for resist-single");
  }
  if (cfg.kind == "rls") {
    if (cfg.d < 1) err("instance.d", "required positive integer for rls");
    if (cfg.R <= 0.0) err("instance.R", "must be positive");
    if (cfg.noise < 0.0) err("instance.noise", "must be non-negative");
  }

  if (j.contains("concentration")) {
    const json& c = j["concentration"];
    if (!c.is_object()) {
      err("concentration", "must be an object");
    } else {
      if (c.contains("delta")) cfg.delta = c["delta"].get<double>();
      if (c.contains("c")) cfg.conc_c = c["c"].get<double>();
      if (c.contains("C")) cfg.conc_C = c["C"].get<double>();
      if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) err("concentration.delta", "must lie in (0,1)");
      if (cfg.conc_c <= 0.0) err("concentration.c", "must be positive");
      if (cfg.conc_C <= 0.0) err("concentration.C", "must be positive");
    }
  }

  if (j.contains("budget")) {
    if (!j["budget"].is_number_integer() || j["budget"].get<long long>() < 1)
      err("budget", "must be a positive integer");
    else
      cfg.budget = j["budget"].get<long long>();
  }
  if (j.contains("eps")) {
    const double e = j["eps"].is_number() ? j["eps"].get<double>() : -1.0;
    if (!(e > 0.0 && e < 1.0))
      err("eps", "must lie in (0,1)");
    else
      cfg.eps = e;
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string())
      err("output_dir", "must be a string");
    else
      cfg.output_dir = j["output_dir"].get<std::string>();
  }

  if (j.contains("solvers")) {
    if (!j["solvers"].is_array()) {
      err("solvers", "must be an array");
    } else {
      int idx = 0;
      for (const json& s : j["solvers"]) {
        const std::string path = "solvers[" + std::to_string(idx) + "]";
        SolverConfig sc;
        if (!s.is_object() || !s.contains("name") || !s["name"].is_string()) {
          err(path + ".name", "required string field");
        } else {
          sc.name = s["name"].get<std::string>();
          if (!solver_exists(sc.name)) err(path + ".name", "unknown solver '" + sc.name + "'");
        }
        sc.budget = cfg.budget;
        if (s.is_object()) {
          if (s.contains("budget")) {
            if (!s["budget"].is_number_integer() || s["budget"].get<long long>() < 1)
              err(path + ".budget", "must be a positive integer");
            else
              sc.budget = s["budget"].get<long long>();
          }
          if (s.contains("step")) sc.step = s["step"].get<double>();
          if (s.contains("epoch")) sc.epoch = s["epoch"].get<long long>();
          if (s.contains("seed")) sc.seed = s["seed"].get<std::uint64_t>();
          if (s.contains("mu_eff")) sc.mu_eff = s["mu_eff"].get<double>();
          if (s.contains("L_eff")) sc.L_eff = s["L_eff"].get<double>();
        }
        if (sc.budget < 1 && cfg.kind != "bounds-table")
          err(path + ".budget", "must be positive (set a per-solver or default budget)");
        cfg.solvers.push_back(std::move(sc));
        ++idx;
      }
    }
  }

  if (!out.errors.empty()) return out;
  out.config = std::move(cfg);
  return out;
}

std::string config_to_json(const ExperimentConfig& cfg, int indent) {
  json j;
  j["kind"] = cfg.kind;
  json inst;
  inst["n"] = cfg.n;
  inst["mu"] = cfg.mu;
  inst["L"] = cfg.L;
  inst["gamma"] = cfg.gamma;
  if (cfg.component_dim > 0) inst["component_dim"] = cfg.component_dim;
  if (cfg.dim > 0) inst["dim"] = cfg.dim;
  if (cfg.kind == "rls") {
    inst["d"] = cfg.d;
    inst["R"] = cfg.R;
    inst["noise"] = cfg.noise;
    inst["seed"] = cfg.data_seed;
    inst["convention"] = cfg.convention;
  }
  j["instance"] = inst;
  if (cfg.kind == "rls") {
    j["concentration"] = {{"delta", cfg.delta}, {"c", cfg.conc_c}, {"C", cfg.conc_C}};
  }
  j["budget"] = cfg.budget;
  j["eps"] = cfg.eps;
  j["output_dir"] = cfg.output_dir;
  json solvers = json::array();
  for (const SolverConfig& s : cfg.solvers) {
    json sj;
    sj["name"] = s.name;
    sj["budget"] = s.budget;
    sj["seed"] = s.seed;
    if (s.step) sj["step"] = *s.step;
    if (s.epoch) sj["epoch"] = *s.epoch;
    if (s.mu_eff) sj["mu_eff"] = *s.mu_eff;
    if (s.L_eff) sj["L_eff"] = *s.L_eff;
    solvers.push_back(sj);
  }
  j["solvers"] = solvers;
  return j.dump(indent);
}

namespace {

struct Outcome {
  RunTrace trace;
  std::optional<Certificate> cert;
  std::string transcript_csv;
  std::string error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
}

Outcome run_one_resist(const ExperimentConfig& cfg, const SolverConfig& scfg) {
  Outcome o;
  try {
    TraceHooks hooks;
    hooks.keep_iterates = true;
    const bool deterministic = solver_deterministic(scfg.name);
    if (cfg.kind == "resist-single") {
      ResistingSingleIfo oracle(cfg.mu, cfg.L, cfg.gamma, cfg.dim);
      o.trace = run_solver(scfg, oracle, hooks);
      auto fin = oracle.finalize(o.trace.final_iterate, scfg.name, deterministic);
      backfill_rel_errors(o.trace, *fin.problem->minimizer(), fin.problem->gamma());
      const ReplayResult replay =
          transcript_replay_check(scfg, oracle.transcript(), o.trace.final_iterate, 1, cfg.mu, cfg.L, cfg.dim);
      fin.certificate.replay_verified = replay.ok;
      if (!replay.ok && fin.certificate.status == CertStatus::kAsserted) {
        fin.certificate.pass = false;
        fin.certificate.note += "; replay diverged at call " + std::to_string(replay.first_divergence);
      }
      std::ostringstream ts;
      oracle.transcript().write_csv(ts);
      o.transcript_csv = ts.str();
      o.cert = std::move(fin.certificate);
    } else {
      ResistingIfo oracle(cfg.n, cfg.mu, cfg.L, cfg.gamma, cfg.component_dim, scfg.budget);
      o.trace = run_solver(scfg, oracle, hooks);
      auto fin = oracle.finalize(o.trace.final_iterate, scfg.name, deterministic);
      backfill_rel_errors(o.trace, *fin.problem->minimizer(), fin.problem->gamma());
      const ReplayResult replay = transcript_replay_check(scfg, oracle.transcript(), o.trace.final_iterate, cfg.n,
                                                          cfg.mu, cfg.L, oracle.dim());
      fin.certificate.replay_verified = replay.ok;
      if (!replay.ok && fin.certificate.status == CertStatus::kAsserted) {
        fin.certificate.pass = false;
        fin.certificate.note += "; replay diverged at call " + std::to_string(replay.first_divergence);
      }
      std::ostringstream ts;
      oracle.transcript().write_csv(ts);
      o.transcript_csv = ts.str();
      o.cert = std::move(fin.certificate);
    }
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  return o;
}

Outcome run_one_static(const FiniteSumProblem& problem, const SolverConfig& scfg) {
  Outcome o;
  try {
    StaticIfo oracle(problem);
    TraceHooks hooks;
    if (problem.minimizer()) {
      const Point xstar = *problem.minimizer();
      const double gamma = problem.gamma();
      hooks.rel_error = [xstar, gamma](const Point& x) { return norm(sub(x, xstar)) / gamma; };
    }
    hooks.objective = [&problem](const Point& x) { return problem.value(x); };
    o.trace = run_solver(scfg, oracle, hooks);
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  return o;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (const char* env = std::getenv("IFOBENCH_OUT"); env != nullptr && env[0] != '\0') cfg.output_dir = env;

  ExperimentReport rep;
  rep.config = cfg;
  rep.output_dir = cfg.output_dir;
  fs::create_directories(cfg.output_dir);

  double gamma_ref = cfg.gamma;
  std::shared_ptr<FiniteSumProblem> problem;

  if (cfg.kind == "hard-static") {
    problem = std::make_shared<FiniteSumProblem>(build_hard_instance(cfg.n, cfg.mu, cfg.L, cfg.gamma, cfg.component_dim));
  } else if (cfg.kind == "rls") {
    const RlsDataset dataset =
        sample_sphere_dataset(cfg.n, cfg.d, cfg.R, cfg.mu, cfg.noise, cfg.data_seed, parse_convention(cfg.convention));
    problem = std::make_shared<FiniteSumProblem>(rls_problem(dataset));
    gamma_ref = problem->gamma();
    rep.spectrum = empirical_spectrum(dataset);
    rep.complexity = regime_table({cfg.n, cfg.mu, dataset.smoothness_L(), rep.spectrum.mu_f, rep.spectrum.L_f});
    rep.concentration = concentration_check(cfg.d, cfg.n, cfg.delta, cfg.conc_c, cfg.conc_C, rep.spectrum.kappa_f);
    rep.has_complexity = true;
    rep.notes.push_back("concentration sites use log(d/delta) for the threshold and log(2/delta) inside z, as stated");
    std::ostringstream data_csv;
    write_rls_csv(dataset, data_csv);
    write_file(fs::path(cfg.output_dir) / "dataset.csv", data_csv.str());
    write_file(fs::path(cfg.output_dir) / "dataset.json", rls_header_json(dataset) + "\n");
    write_file(fs::path(cfg.output_dir) / "regimes.txt", complexity_table_text(rep.complexity));
  } else if (cfg.kind == "bounds-table") {
    rep.bounds = lower_bound_calls(cfg.n, cfg.L / cfg.mu, cfg.eps);
    rep.has_bounds = true;
  }

  const double kappa = cfg.L / cfg.mu;
  rep.rate = make_rate_report(kappa, cfg.n, gamma_ref);

  std::vector<Outcome> outcomes(cfg.solvers.size());
  {
    std::vector<std::thread> workers;
    workers.reserve(cfg.solvers.size());
    for (std::size_t idx = 0; idx < cfg.solvers.size(); ++idx) {
      workers.emplace_back([&, idx]() {
        const SolverConfig& scfg = cfg.solvers[idx];
        if (cfg.kind == "resist-single" || cfg.kind == "resist-ifo")
          outcomes[idx] = run_one_resist(cfg, scfg);
        else if (problem)
          outcomes[idx] = run_one_static(*problem, scfg);
        else
          outcomes[idx].error = "kind '" + cfg.kind + "' does not run solvers";
      });
    }
    for (std::thread& w : workers) w.join();
  }

  const auto ln_bound = [gamma_ref, kappa, n = cfg.n](long long K) {
    return lower_bound_curve(gamma_ref, kappa, n, K).log_value;
  };

  for (std::size_t idx = 0; idx < cfg.solvers.size(); ++idx) {
    const SolverConfig& scfg = cfg.solvers[idx];
    Outcome& o = outcomes[idx];
    RunSummary rs;
    rs.algo = scfg.name;
    rs.seed = scfg.seed;
    rs.budget = scfg.budget;
    rs.error = o.error;
    const std::string tag = (idx < 10 ? "0" : "") + std::to_string(idx) + "_" + scfg.name;
    if (o.error.empty()) {
      rs.calls = o.trace.total_calls;
      rs.final_rel_error =
          o.trace.samples.empty() ? std::numeric_limits<double>::quiet_NaN() : o.trace.samples.back().rel_error;
      rs.slope_loglog = loglog_slope(o.trace);
      rs.trace_csv = "trace_" + tag + ".csv";
      std::ostringstream trace_csv;
      write_trace_csv(o.trace, trace_csv, ln_bound);
      write_file(fs::path(cfg.output_dir) / rs.trace_csv, trace_csv.str());
      if (!o.transcript_csv.empty())
        write_file(fs::path(cfg.output_dir) / ("transcript_" + tag + ".csv"), o.transcript_csv);
      if (o.cert) {
        write_file(fs::path(cfg.output_dir) / ("cert_" + tag + ".json"), o.cert->to_json() + "\n");
        rep.certificates.push_back(*o.cert);
        if (!o.cert->rollup_ok()) rep.rollup_pass = false;
      }
    } else {
      rep.rollup_pass = false;
      rep.notes.push_back(scfg.name + ": " + o.error);
    }
    rep.runs.push_back(std::move(rs));
  }

  write_file(fs::path(cfg.output_dir) / "report.json", report_to_json(rep) + "\n");
  return rep;
}

std::string report_to_json(const ExperimentReport& rep, int indent) {
  json j;
  j["config"] = json::parse(config_to_json(rep.config));
  j["rate"] = json::parse(rate_report_json(rep.rate));
  json runs = json::array();
  for (const RunSummary& r : rep.runs) {
    json rj;
    rj["algo"] = r.algo;
    rj["seed"] = r.seed;
    rj["budget"] = r.budget;
    rj["calls"] = r.calls;
    rj["final_rel_error"] = r.final_rel_error;
    rj["slope_loglog"] = r.slope_loglog;
    rj["trace_csv"] = r.trace_csv;
    if (!r.error.empty()) rj["error"] = r.error;
    runs.push_back(rj);
  }
  j["runs"] = runs;
  json certs = json::array();
  for (const Certificate& c : rep.certificates) certs.push_back(json::parse(c.to_json()));
  j["certificates"] = certs;
  if (rep.has_complexity) {
    j["spectrum"] = {{"mu_f", rep.spectrum.mu_f}, {"L_f", rep.spectrum.L_f}, {"kappa_f", rep.spectrum.kappa_f}};
    j["complexity"] = json::parse(complexity_report_json(rep.complexity));
    j["concentration"] = {{"satisfied", rep.concentration.satisfied},
                          {"lhs", rep.concentration.lhs},
                          {"rhs", rep.concentration.rhs},
                          {"z", rep.concentration.z}};
  }
  if (rep.has_bounds) {
    j["bounds"] = {{"K_exact", rep.bounds.K_exact}, {"K_asymptotic", rep.bounds.K_asymptotic}, {"eps", rep.config.eps}};
  }
  j["rollup_pass"] = rep.rollup_pass;
  j["notes"] = rep.notes;
  return j.dump(indent);
}

}  // namespace ifobench
