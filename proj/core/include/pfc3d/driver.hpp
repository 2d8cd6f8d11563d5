#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pfc3d/multigrid.hpp"

namespace pfc3d {

enum class InitKind { smooth, random };
enum class Bootstrap { copy, first_order };

const char* to_string(InitKind k);
const char* to_string(Bootstrap b);

/// Identifier of the generator behind init_random, written into run reports.
inline constexpr const char* kRandomAlgorithm = "mt19937_64/u01-53bit";

struct RunConfig {
  int m = 0;
  double L = 0.0;
  double epsilon = 0.0;
  double tau = 0.0;
  /// Number of time levels after phi^0; the run ends at n_steps * tau.
  int n_steps = 0;
  InitKind init = InitKind::smooth;
  std::uint64_t seed = 0;
  Bootstrap bootstrap = Bootstrap::copy;
  MGConfig mg;
  MobilityModel mobility;

  int energy_log_every = 1;
  /// Snapshot cadence; when absent only the final state is written.
  std::optional<int> snapshot_every;
  bool export_structured_points = false;
  /// Empty: nothing is written to disk.
  std::filesystem::path output_dir;
  /// Relative slack for the energy bound check.
  double stability_slack = 1e-9;
  bool fail_on_nonconvergence = true;

  GridSpec grid() const { return GridSpec(m, L); }
  double t_final() const { return n_steps * tau; }
  /// Throws ConfigError for inconsistent values.
  void validate() const;
};

struct StepRecord {
  int step;
  double time;
  double energy;
  double modified_energy;
  int mg_cycles;
  double residual;
};

struct StabilityViolation {
  int step;
  double energy;
  double bound;
};

struct SnapshotEntry {
  int step;
  double time;
  std::filesystem::path path;
};

struct RunReport {
  RunConfig config;
  std::string rng_algorithm = kRandomAlgorithm;
  std::vector<StepRecord> records;
  std::vector<StabilityViolation> stability_violations;
  std::vector<SnapshotEntry> snapshots;
  /// F_h(phi^1) + 1/2 ||grad(phi^1 - phi^0)||^2.
  double energy_bound = 0.0;
  double initial_mean = 0.0;
  double max_mass_drift = 0.0;
  int nonconverged_steps = 0;
  std::optional<CellField> final_phi;
};

/// 0.2 + 0.05 cos(2 pi x / 3.2) cos(2 pi y / 3.2) cos(2 pi z / 3.2) at cell centers.
CellField init_smooth(const GridSpec& grid);

/// 0.2 + 0.005 r_{ijk}, r uniform on [0, 1), drawn in storage order from
/// mt19937_64(seed) with the top 53 bits of each draw.
CellField init_random(const GridSpec& grid, std::uint64_t seed);

CellField initial_field(const RunConfig& config);

/// phi^1 from phi^0: a copy, or one step of the first-order convex-splitting
/// scheme solved by the same multigrid. Throws SolverError if that solve fails.
CellField bootstrap_first_step(const CellField& phi0, const RunConfig& config,
                               SolveReport* report = nullptr);

/// Called after every completed time level (step >= 1) with the new field.
using StepObserver = std::function<void(int step, const CellField& phi, const SolveReport& solve)>;

/// Time marching with energy and mass monitoring. Writes the energy log,
/// snapshots and a JSON report when config.output_dir is set.
RunReport run(const RunConfig& config, const StepObserver& observer = {});

/// Energy-log CSV with header step,time,F_h,modified_energy,mg_cycles,residual.
void write_energy_log(const std::filesystem::path& path, const std::vector<StepRecord>& records);

}  // namespace pfc3d
