#include "pfc3d/driver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "pfc3d/energy.hpp"
#include "pfc3d/error.hpp"
#include "pfc3d/io.hpp"

namespace pfc3d {

const char* to_string(InitKind k) { return k == InitKind::smooth ? "smooth" : "random"; }

const char* to_string(Bootstrap b) { return b == Bootstrap::copy ? "copy" : "first_order"; }

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (m < 2) fail("m must be >= 2");
  if (!(L > 0.0) || !std::isfinite(L)) fail("L must be > 0");
  if (!std::isfinite(epsilon)) fail("epsilon must be finite");
  if (!(tau > 0.0) || !std::isfinite(tau)) fail("tau must be > 0");
  if (n_steps < 1) fail("n_steps must be >= 1");
  if (energy_log_every < 1) fail("energy_log_every must be >= 1");
  if (snapshot_every && *snapshot_every < 1) fail("snapshot_every must be >= 1");
  if (!(stability_slack >= 0.0)) fail("stability_slack must be >= 0");
  try {
    mg.validate(m);
  } catch (const ContractError& e) {
    fail(e.what());
  }
}

CellField init_smooth(const GridSpec& grid) {
  CellField phi(grid);
  const double w = 2.0 * std::numbers::pi / 3.2;
  const int m = grid.m();
  std::vector<double> c(m);
  for (int i = 0; i < m; ++i) c[i] = std::cos(w * grid.center(i + 1));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) phi.at0(i, j, k) = 0.2 + 0.05 * c[i] * c[j] * c[k];
  return phi;
}

CellField init_random(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  CellField phi(grid);
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  for (double& v : phi.values()) {
    const double r = static_cast<double>(gen() >> 11) * kScale;
    v = 0.2 + 0.005 * r;
  }
  return phi;
}

CellField initial_field(const RunConfig& config) {
  return config.init == InitKind::smooth ? init_smooth(config.grid())
                                         : init_random(config.grid(), config.seed);
}

CellField bootstrap_first_step(const CellField& phi0, const RunConfig& config, SolveReport* report) {
  if (config.bootstrap == Bootstrap::copy) {
    if (report) *report = SolveReport{0, {{0, 0.0}}, true, 0.0, 0.0};
    return phi0;
  }
  const SchemeState state(phi0, phi0, config.tau, {config.epsilon}, config.mobility,
                          SchemeKind::first_order);
  auto [u, rep] = solve_timestep(state, config.mg);
  if (!rep.converged) {
    std::ostringstream os;
    os << "first-order bootstrap did not converge in " << rep.cycles
       << " cycles (residual " << rep.final_residual << ")";
    throw SolverError(os.str());
  }
  if (report) *report = rep;
  return std::move(u.phi);
}

void write_energy_log(const std::filesystem::path& path, const std::vector<StepRecord>& records) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw IoError("cannot open " + path.string());
  std::fprintf(fp, "step,time,F_h,modified_energy,mg_cycles,residual\n");
  for (const auto& r : records) {
    std::fprintf(fp, "%d,%.17g,%.17g,%.17g,%d,%.17g\n", r.step, r.time, r.energy,
                 r.modified_energy, r.mg_cycles, r.residual);
  }
  std::fclose(fp);
}

namespace {

const char* to_string(SmootherOrder o) {
  return o == SmootherOrder::lexicographic ? "lexicographic" : "red-black";
}

nlohmann::json report_json(const RunReport& rep) {
  const RunConfig& c = rep.config;
  nlohmann::json j;
  j["config"] = {
      {"m", c.m},
      {"L", c.L},
      {"epsilon", c.epsilon},
      {"tau", c.tau},
      {"n_steps", c.n_steps},
      {"t_final", c.t_final()},
      {"init", to_string(c.init)},
      {"seed", c.seed},
      {"bootstrap", to_string(c.bootstrap)},
      {"mobility", c.mobility.name()},
      {"nu1", c.mg.nu1},
      {"nu2", c.mg.nu2},
      {"tol", c.mg.tol},
      {"max_cycles", c.mg.max_cycles},
      {"coarsest_m", c.mg.coarsest_m},
      {"smoother", to_string(c.mg.order)},
      {"coarse_sweeps", c.mg.coarse_sweeps},
      {"prolongation", c.mg.prolongation == Prolongation::constant ? "constant" : "trilinear"},
      {"residual_norm", c.mg.norm == ResidualNorm::l2 ? "l2" : "linf"},
  };
  j["rng_algorithm"] = rep.rng_algorithm;
  j["energy_bound"] = rep.energy_bound;
  j["initial_mean"] = rep.initial_mean;
  j["max_mass_drift"] = rep.max_mass_drift;
  j["nonconverged_steps"] = rep.nonconverged_steps;
  auto& viol = j["stability_violations"] = nlohmann::json::array();
  for (const auto& v : rep.stability_violations) {
    viol.push_back({{"step", v.step}, {"energy", v.energy}, {"bound", v.bound}});
  }
  auto& snaps = j["snapshots"] = nlohmann::json::array();
  for (const auto& s : rep.snapshots) {
    snaps.push_back({{"step", s.step}, {"time", s.time}, {"path", s.path.filename().string()}});
  }
  return j;
}

}  // namespace

RunReport run(const RunConfig& config, const StepObserver& observer) {
  config.validate();
  const EnergyParams params{config.epsilon};

  RunReport rep;
  rep.config = config;

  std::optional<DirectoryLock> lock;
  std::filesystem::path snap_dir;
  if (!config.output_dir.empty()) {
    lock.emplace(config.output_dir);
    snap_dir = config.output_dir / "snapshots";
    std::filesystem::create_directories(snap_dir);
  }
  auto snapshot = [&](int step, const CellField& phi) {
    if (snap_dir.empty()) return;
    std::ostringstream name;
    name << "phi_" << std::setw(6) << std::setfill('0') << step;
    const auto path = snap_dir / (name.str() + ".pfc3d");
    write_snapshot(path, phi, {step * config.tau, static_cast<std::uint64_t>(step)});
    if (config.export_structured_points) export_structured_points(snap_dir / (name.str() + ".vtk"), phi);
    rep.snapshots.push_back({step, step * config.tau, path});
  };
  auto snapshot_due = [&](int step) {
    if (step == config.n_steps) return true;
    return config.snapshot_every && step % *config.snapshot_every == 0;
  };
  auto log_due = [&](int step) { return step % config.energy_log_every == 0 || step == config.n_steps; };

  CellField phi_prev = initial_field(config);
  rep.initial_mean = mean(phi_prev);
  const double e0 = discrete_energy(phi_prev, params);
  rep.records.push_back({0, 0.0, e0, e0, 0, 0.0});
  if (snapshot_due(0)) snapshot(0, phi_prev);

  SolveReport boot;
  CellField phi_curr = bootstrap_first_step(phi_prev, config, &boot);
  rep.energy_bound = modified_energy(phi_curr, phi_prev, params);
  const double slack = config.stability_slack * std::fabs(rep.energy_bound);

  auto after_step = [&](int step, const CellField& phi_new, const CellField& phi_old,
                        const SolveReport& solve) {
    if (!phi_new.all_finite()) {
      throw SolverError("non-finite values in phi at step " + std::to_string(step));
    }
    const double e = discrete_energy(phi_new, params);
    if (e > rep.energy_bound + slack) rep.stability_violations.push_back({step, e, rep.energy_bound});
    rep.max_mass_drift = std::max(rep.max_mass_drift, std::fabs(mean(phi_new) - rep.initial_mean));
    if (log_due(step)) {
      rep.records.push_back({step, step * config.tau, e,
                             e + 0.5 * grad_norm_sq(phi_new - phi_old), solve.cycles,
                             solve.final_residual});
    }
    if (snapshot_due(step)) snapshot(step, phi_new);
    if (observer) observer(step, phi_new, solve);
  };
  after_step(1, phi_curr, phi_prev, boot);

  for (int step = 2; step <= config.n_steps; ++step) {
    const SchemeState state(phi_curr, phi_prev, config.tau, params, config.mobility);
    auto [u, solve] = solve_timestep(state, config.mg);
    if (!solve.converged) {
      ++rep.nonconverged_steps;
      if (config.fail_on_nonconvergence) {
        std::ostringstream os;
        os << "multigrid did not converge at step " << step << " after " << solve.cycles
           << " cycles (residual " << solve.final_residual << ")";
        throw SolverError(os.str());
      }
    }
    after_step(step, u.phi, phi_curr, solve);
    phi_prev = std::move(phi_curr);
    phi_curr = std::move(u.phi);
  }
  rep.final_phi = std::move(phi_curr);

  if (!config.output_dir.empty()) {
    write_energy_log(config.output_dir / "energy.csv", rep.records);
    std::ofstream out(config.output_dir / "report.json");
    out << std::setw(2) << report_json(rep) << "\n";
  }
  return rep;
}

}  // namespace pfc3d
