#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ifobench/experiment.hpp"

namespace {

int load_and_run(const std::string& config_path, const std::string& out_override, bool require_certification) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config file '" << config_path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  ifobench::ParseResult parsed = ifobench::parse_config(buf.str());
  if (!parsed.config) {
    std::cerr << "config validation failed:\n";
    for (const std::string& e : parsed.errors) std::cerr << "  " << e << '\n';
    return 2;
  }
  ifobench::ExperimentConfig cfg = *parsed.config;
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (require_certification && cfg.kind != "resist-single" && cfg.kind != "resist-ifo") {
    std::cerr << "error: certify requires kind resist-single or resist-ifo (got '" << cfg.kind << "')\n";
    return 2;
  }

  try {
    const ifobench::ExperimentReport rep = ifobench::run_experiment(cfg);
    for (const ifobench::RunSummary& r : rep.runs) {
      std::cout << r.algo << ": calls=" << r.calls;
      if (std::isfinite(r.final_rel_error)) std::cout << " rel_error=" << ifobench::fmt_double(r.final_rel_error);
      if (!r.error.empty()) std::cout << " error=" << r.error;
      std::cout << '\n';
    }
    for (const ifobench::Certificate& c : rep.certificates) {
      std::cout << "certificate " << c.algo << ": status=" << ifobench::to_string(c.status)
                << " pass=" << (c.pass ? "true" : "false") << " replay=" << (c.replay_verified ? "true" : "false")
                << " ln_observed=" << ifobench::fmt_double(c.ln_observed)
                << " ln_bound=" << ifobench::fmt_double(c.ln_bound) << '\n';
    }
    for (const std::string& note : rep.notes) std::cout << "note: " << note << '\n';
    std::cout << "report: " << rep.output_dir << "/report.json\n";
    std::cout << (rep.rollup_pass ? "PASS" : "FAIL") << '\n';
    return rep.rollup_pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int show_report(const std::string& dir) {
  const std::string path = dir + "/report.json";
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  std::cout << buf.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-sum optimization benchmark: worst-case instances, adaptive adversaries, "
               "reference solvers and rate calculators"};
  app.require_subcommand(1);

  std::string config_path, out_override, report_dir;
  int bounds_n = 1;
  double bounds_kappa = 0.0, bounds_eps = 1e-6, bounds_gamma = 1.0;

  CLI::App* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "path to the experiment config")->required();
  run->add_option("--out", out_override, "output directory override");

  CLI::App* certify = app.add_subcommand("certify", "run a lower-bound certification experiment");
  certify->add_option("config", config_path, "path to the experiment config (resist-* kinds)")->required();
  certify->add_option("--out", out_override, "output directory override");

  CLI::App* bounds = app.add_subcommand("bounds", "print rate and call-count lower bounds");
  bounds->add_option("--n", bounds_n, "number of components")->required();
  bounds->add_option("--kappa", bounds_kappa, "surrogate condition number L/mu")->required();
  bounds->add_option("--eps", bounds_eps, "target relative accuracy");
  bounds->add_option("--gamma", bounds_gamma, "minimizer norm");

  CLI::App* report = app.add_subcommand("report", "print the report of a finished experiment directory");
  report->add_option("dir", report_dir, "experiment output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) return load_and_run(config_path, out_override, false);
  if (certify->parsed()) return load_and_run(config_path, out_override, true);
  if (report->parsed()) return show_report(report_dir);

  if (bounds->parsed()) {
    try {
      const ifobench::RateReport rate = ifobench::make_rate_report(bounds_kappa, bounds_n, bounds_gamma);
      std::cout << ifobench::rate_report_json(rate) << '\n';
      const ifobench::CallBounds cb = ifobench::lower_bound_calls(bounds_n, bounds_kappa, bounds_eps);
      std::cout << "K_exact=" << cb.K_exact << " K_asymptotic=" << cb.K_asymptotic << " (eps="
                << ifobench::fmt_double(bounds_eps) << ")\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 2;
}
