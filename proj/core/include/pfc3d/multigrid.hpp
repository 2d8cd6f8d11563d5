#pragma once

// Nonlinear FAS multigrid for the per-step system N(u) = S.
//
// Smoothing is a pointwise nonlinear Gauss-Seidel: at every cell the cubic
// term is linearized about the current iterate and the resulting 3x3 system
// in (phi, mu, omega) is solved by Cramer's rule, with neighbor values taken
// from the current (partially updated) iterate.

#include <optional>
#include <utility>
#include <vector>

#include "pfc3d/scheme.hpp"

namespace pfc3d {

enum class SmootherOrder { lexicographic, red_black };
enum class Prolongation { constant, trilinear };

struct MGConfig {
  int nu1 = 2;
  int nu2 = 2;
  double tol = 1e-8;
  int max_cycles = 50;
  int coarsest_m = 2;
  SmootherOrder order = SmootherOrder::lexicographic;
  /// Cap on smoothing sweeps used as the coarsest-level solve.
  int coarse_sweeps = 200;
  Prolongation prolongation = Prolongation::constant;
  ResidualNorm norm = ResidualNorm::l2;

  /// Throws ContractError unless the parameters are usable for fine grid m.
  void validate(int fine_m) const;
};

struct SolveReport {
  int cycles = 0;
  /// (cycle, residual norm); cycle 0 is the initial guess.
  std::vector<std::pair<int, double>> residual_history;
  bool converged = false;
  double final_residual = 0.0;
  /// |mean(phi^{k+1}) - mean(phi^k)|.
  double mass_drift = 0.0;
};

/// Performs `sweeps` in-place Gauss-Seidel passes on u for N(u) = source.
/// Throws SingularSystemError if a local determinant vanishes.
void smooth(StageVector& u, const SchemeState& state, const MobilityFaces& faces,
            const StageVector& source, int sweeps, SmootherOrder order);

/// Mean over the 8 fine children of each coarse cell. Requires even m.
CellField restrict_cells(const CellField& fine);
/// Copies each coarse value to its 8 children (or trilinear interpolation).
CellField prolong_cells(const CellField& coarse, Prolongation kind = Prolongation::constant);

StageVector restrict_stage(const StageVector& fine);
StageVector prolong_stage(const StageVector& coarse, Prolongation kind);

/// Grid levels 0 (finest) .. depth()-1 (coarsest). Coarse levels carry a
/// SchemeState built from restricted phi^k, phi^{k-1} so that their
/// mobility and frozen nonlinear coefficients are genuine coarse-grid data.
class MGHierarchy {
 public:
  struct Level {
    SchemeState state;
    MobilityFaces faces;
  };

  MGHierarchy(const SchemeState& fine, const MGConfig& config);

  int depth() const { return static_cast<int>(levels_.size()); }
  const Level& level(int l) const { return levels_[l]; }

 private:
  std::vector<Level> levels_;
};

/// One FAS V-cycle at `level` for N_level(u) = source, in place.
void vcycle(const MGHierarchy& hierarchy, int level, StageVector& u, const StageVector& source,
            const MGConfig& config);

/// Smoother iterations on the coarsest grid until the residual drops below
/// 0.1 * tol or config.coarse_sweeps is exhausted.
void coarse_solve(const MGHierarchy& hierarchy, int level, StageVector& u,
                  const StageVector& source, const MGConfig& config);

/// Runs at least one V-cycle, then repeats until the residual is at most tol
/// or max_cycles is hit.
/// A non-converged solve is reported, not thrown.
std::pair<StageVector, SolveReport> solve_timestep(const SchemeState& state,
                                                    const MGConfig& config,
                                                    std::optional<StageVector> u0 = std::nullopt);

}  // namespace pfc3d
