#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "pfc3d/config.hpp"
#include "pfc3d/error.hpp"
#include "pfc3d/harness.hpp"
#include "pfc3d/io.hpp"
#include "pfc3d/parallel.hpp"
#include "pfc3d/verify.hpp"

namespace pfc3d::cli {

namespace {

struct Options {
  std::string config;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string suite = "all";
  int instances = 0;
};

std::ostream& error_line(std::ostream& err) { return err << "pfc3d: error: "; }

int resolve_threads(const Options& o) {
  if (o.threads) return *o.threads;
  if (const char* env = std::getenv("PFC3D_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1 || n > 4096) {
      throw ConfigError(std::string("PFC3D_THREADS must be a positive integer (got \"") + env + "\")");
    }
    return static_cast<int>(n);
  }
  return 1;
}

ExperimentConfig load(const Options& o, Purpose purpose) {
  ExperimentConfig ec = parse_config(o.config, purpose);
  if (o.seed) ec.run.seed = *o.seed;
  if (!o.output.empty()) ec.run.output_dir = o.output;
  return ec;
}

int do_run(const Options& o, std::ostream& out) {
  const ExperimentConfig ec = load(o, Purpose::run);
  const RunConfig& c = ec.run;
  out << "run: m=" << c.m << " L=" << c.L << " epsilon=" << c.epsilon << " tau=" << c.tau
      << " steps=" << c.n_steps << " init=" << to_string(c.init) << " bootstrap=" << to_string(c.bootstrap)
      << " threads=" << num_threads() << "\n";
  const RunReport rep = run(c);
  out << std::setprecision(12);
  const StepRecord& first = rep.records.front();
  const StepRecord& last = rep.records.back();
  out << "F_h(step 0) = " << first.energy << "\n";
  out << "F_h(step " << last.step << ") = " << last.energy << "\n";
  out << "energy bound = " << rep.energy_bound << "\n";
  out << "stability violations = " << rep.stability_violations.size() << "\n";
  for (const auto& v : rep.stability_violations) {
    out << "  step " << v.step << ": F_h = " << v.energy << " > " << v.bound << "\n";
  }
  out << "max mass drift = " << rep.max_mass_drift << "\n";
  out << "non-converged steps = " << rep.nonconverged_steps << "\n";
  if (!c.output_dir.empty()) {
    out << "wrote " << rep.snapshots.size() << " snapshots, energy.csv and report.json to "
        << c.output_dir.string() << "\n";
  }
  return kOk;
}

int do_converge(const Options& o, std::ostream& out) {
  const ExperimentConfig ec = load(o, Purpose::converge);
  std::optional<DirectoryLock> lock;
  if (!ec.run.output_dir.empty()) lock.emplace(ec.run.output_dir);
  const ConvergenceReport rep = cauchy_convergence_test(ec.run, ec.grids, ec.tau_over_h, ec.t_final);
  out << "m_coarse,m_fine,cauchy_l2,cauchy_linf,rate\n";
  out << std::scientific << std::setprecision(6);
  for (const auto& r : rep.rows) {
    out << r.m_coarse << "," << r.m_fine << "," << r.l2 << "," << r.linf << ",";
    if (!std::isnan(r.rate)) out << std::fixed << std::setprecision(4) << r.rate << std::scientific << std::setprecision(6);
    out << "\n";
  }
  if (!ec.run.output_dir.empty()) {
    write_convergence_csv(ec.run.output_dir / "convergence.csv", rep);
    out << "wrote " << (ec.run.output_dir / "convergence.csv").string() << "\n";
  }
  return kOk;
}

int do_complexity(const Options& o, std::ostream& out) {
  const ExperimentConfig ec = load(o, Purpose::complexity);
  std::optional<DirectoryLock> lock;
  if (!ec.run.output_dir.empty()) lock.emplace(ec.run.output_dir);
  const ComplexityReport rep = complexity_test(ec.run, ec.grids, ec.smoothing);
  out << "nu1,nu2";
  for (int m : ec.grids) out << ",m" << m;
  out << "\n";
  for (const auto& [nu1, nu2] : ec.smoothing) {
    out << nu1 << "," << nu2;
    for (const auto& cc : rep.cases)
      if (cc.nu1 == nu1 && cc.nu2 == nu2) out << "," << cc.iterations << (cc.converged ? "" : "*");
    out << "\n";
  }
  if (!ec.run.output_dir.empty()) {
    write_complexity_csv(ec.run.output_dir / "complexity.csv", rep);
    write_residuals_csv(ec.run.output_dir / "residuals.csv", rep);
    out << "wrote complexity.csv and residuals.csv to " << ec.run.output_dir.string() << "\n";
  }
  return kOk;
}

int do_verify(const Options& o, std::ostream& out) {
  SuiteOptions so;
  so.instances = o.instances;
  if (o.seed) so.seed = *o.seed;
  std::vector<SuiteResult> suites;
  if (o.suite == "all" || o.suite == "operators") suites.push_back(verify_operator_calculus(so));
  if (o.suite == "all" || o.suite == "energy") suites.push_back(verify_energy(so));
  if (o.suite == "all" || o.suite == "spectral") suites.push_back(verify_spectral(so));
  int checks = 0, failures = 0, properties = 0;
  for (const auto& s : suites) {
    out << format_suite(s);
    checks += s.checks();
    failures += s.failures();
    properties += static_cast<int>(s.properties.size());
  }
  const bool ok = std::all_of(suites.begin(), suites.end(), [](const auto& s) { return s.passed(); });
  out << "verify: " << properties << " properties, " << checks << " checks, " << failures
      << " failures -> " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kOk : kVerificationFailure;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase field crystal solver with nonlinear multigrid", "pfc3d"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--threads", o.threads, "Worker threads (fallback: PFC3D_THREADS, then 1)")
      ->check(CLI::Range(1, 4096));
  app.add_option("--seed", o.seed, "Random seed, overrides the config value");

  CLI::App* run_cmd = app.add_subcommand("run", "Time-march one configuration");
  CLI::App* conv_cmd = app.add_subcommand("converge", "Cauchy-difference convergence study");
  CLI::App* comp_cmd = app.add_subcommand("complexity", "Multigrid iteration counts over grids");
  CLI::App* ver_cmd = app.add_subcommand("verify", "Randomized property suites");
  for (CLI::App* sub : {run_cmd, conv_cmd, comp_cmd}) {
    sub->add_option("--config", o.config, "JSON configuration file")->required();
    sub->add_option("--output", o.output, "Output directory (overrides output_dir)");
  }
  ver_cmd->add_option("--suite", o.suite, "Which suite to run")
      ->check(CLI::IsMember({"all", "operators", "energy", "spectral"}));
  ver_cmd->add_option("--instances", o.instances, "Random instances per grid (default per suite)")
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_line(err) << e.what() << "\n";
    err << app.help();
    return kConfigError;
  }

  try {
    set_num_threads(resolve_threads(o));
    if (run_cmd->parsed()) return do_run(o, out);
    if (conv_cmd->parsed()) return do_converge(o, out);
    if (comp_cmd->parsed()) return do_complexity(o, out);
    return do_verify(o, out);
  } catch (const ConfigError& e) {
    error_line(err) << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    error_line(err) << e.what() << "\n";
    return kSolverFailure;
  }
}

}  // namespace pfc3d::cli
