#pragma once

// Grid-refinement convergence and multigrid-complexity experiments.

#include <filesystem>
#include <utility>
#include <vector>

#include "pfc3d/driver.hpp"

namespace pfc3d {

/// Piecewise-constant coarse-to-fine transfer: every coarse value is copied
/// to its 8 children. Throws ContractError unless m_fine = 2 m_coarse.
CellField nn_interpolate_coarse_to_fine(const CellField& coarse, int m_fine);

struct ConvergenceRow {
  int m_coarse;
  int m_fine;
  double l2;
  double linf;
  /// log2(previous l2 / this l2); NaN on the first row.
  double rate;
};

struct ConvergenceReport {
  RunConfig base;
  double tau_over_h = 0.0;
  double t_final = 0.0;
  std::vector<int> grids;
  std::vector<ConvergenceRow> rows;
};

/// Runs base on each grid with tau = tau_over_h * h up to t_final and records
/// the Cauchy differences phi_fine - I(phi_coarse) of consecutive grids.
/// Grids must double. Throws ConfigError if t_final is not a whole number of
/// steps on some grid; solver failures propagate.
ConvergenceReport cauchy_convergence_test(const RunConfig& base, const std::vector<int>& grids,
                                          double tau_over_h, double t_final);

struct ComplexityCase {
  int m;
  int nu1;
  int nu2;
  /// V-cycles of the last step (max_cycles when it did not converge).
  int iterations;
  bool converged;
  /// One history per step, step 1 first.
  std::vector<std::vector<std::pair<int, double>>> histories;
};

struct ComplexityReport {
  RunConfig base;
  std::vector<ComplexityCase> cases;

  /// Iterations for the given smoothing pair, ordered like the grid list.
  std::vector<int> iterations(int nu1, int nu2) const;
};

/// Runs base.n_steps steps for every grid and smoothing pair. Non-convergence
/// is recorded rather than thrown.
ComplexityReport complexity_test(const RunConfig& base, const std::vector<int>& grids,
                                 const std::vector<std::pair<int, int>>& smoothing);

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& report);
void write_complexity_csv(const std::filesystem::path& path, const ComplexityReport& report);
/// Columns m,nu1,nu2,step,cycle,residual.
void write_residuals_csv(const std::filesystem::path& path, const ComplexityReport& report);

}  // namespace pfc3d
