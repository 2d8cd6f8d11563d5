#pragma once

// One time step of the convex-splitting scheme written as the nonlinear
// algebraic system N(u) = S for the stage vector u = (phi^{k+1}, mu^{k+1/2},
// omega^{k+1/2}):
//
//   N1 = phi - tau * sum_a d_a(M^a D_a mu)                  S1 = phi^k
//   N2 = mu - 1/4 (phi + phi^k)(phi^2 + (phi^k)^2)          S2 = (1-eps)/2 phi^k
//           - (1-eps)/2 phi - lap omega                           + 3 lap phi^k - lap phi^{k-1}
//   N3 = omega - 1/2 lap phi                                S3 = 1/2 lap phi^k
//
// with face mobilities M^a = M(A_a(3/2 phi^k - 1/2 phi^{k-1})).
//
// The first-order variant used to bootstrap phi^1 from phi^0 replaces the
// Crank-Nicolson terms by implicit phi^3, (1-eps) phi and lap^2 phi with an
// explicit 2 lap phi^k:
//
//   N2 = mu - phi^3 - (1-eps) phi - lap omega,  N3 = omega - lap phi,
//   S2 = 2 lap phi^k,  S3 = 0.

#include <functional>
#include <string>

#include "pfc3d/energy.hpp"
#include "pfc3d/grid.hpp"

namespace pfc3d {

/// Scalar mobility M(v) > 0 of the face-averaged extrapolated density.
class MobilityModel {
 public:
  /// M == 1.
  MobilityModel();
  MobilityModel(std::function<double(double)> fn, std::string name);

  double operator()(double v) const { return constant_ ? 1.0 : fn_(v); }
  bool is_constant() const { return constant_; }
  const std::string& name() const { return name_; }

 private:
  std::function<double(double)> fn_;
  std::string name_;
  bool constant_;
};

enum class SchemeKind { crank_nicolson, first_order };

class SchemeState {
 public:
  SchemeState(CellField phi_k, CellField phi_km1, double tau, EnergyParams params,
              MobilityModel mobility = {}, SchemeKind kind = SchemeKind::crank_nicolson);

  const GridSpec& spec() const { return phi_k_.spec(); }
  const CellField& phi_k() const { return phi_k_; }
  const CellField& phi_km1() const { return phi_km1_; }
  double tau() const { return tau_; }
  const EnergyParams& params() const { return params_; }
  const MobilityModel& mobility() const { return mobility_; }
  SchemeKind kind() const { return kind_; }

  /// Density at which the mobility is evaluated: 3/2 phi^k - 1/2 phi^{k-1}
  /// (just phi^k for the first-order variant).
  CellField extrapolated_density() const;

 private:
  CellField phi_k_;
  CellField phi_km1_;
  double tau_;
  EnergyParams params_;
  MobilityModel mobility_;
  SchemeKind kind_;
};

/// Three cell fields sharing one grid. Used both for the unknowns
/// (phi, mu, omega) and for per-equation quantities (N, S, residual), in
/// which case the members hold rows 1, 2, 3.
struct StageVector {
  explicit StageVector(const GridSpec& spec) : phi(spec), mu(spec), omega(spec) {}
  StageVector(CellField p, CellField m, CellField w);

  const GridSpec& spec() const { return phi.spec(); }
  CellField& operator[](int row);
  const CellField& operator[](int row) const;

  StageVector& operator+=(const StageVector& o);
  StageVector& operator-=(const StageVector& o);

  CellField phi;
  CellField mu;
  CellField omega;
};

struct MobilityFaces {
  FaceField x;
  FaceField y;
  FaceField z;
  const FaceField& operator[](Axis a) const;
};

/// Throws ContractError naming the first face where M <= 0 (or non-finite).
MobilityFaces mobility_faces(const SchemeState& state);

StageVector assemble_source(const SchemeState& state);

StageVector apply_operator(const StageVector& u, const SchemeState& state,
                           const MobilityFaces& faces);
StageVector apply_operator(const StageVector& u, const SchemeState& state);

enum class ResidualNorm { l2, linf };

/// sqrt(sum of ||r_row||_2^2) for l2; max over rows of ||r_row||_inf for linf.
double composite_norm(const StageVector& r, ResidualNorm kind = ResidualNorm::l2);

struct Residual {
  StageVector r;
  double norm;
};

/// r = S - N(u). The three-argument form assembles S itself.
Residual residual(const StageVector& u, const StageVector& source, const SchemeState& state,
                  const MobilityFaces& faces, ResidualNorm kind = ResidualNorm::l2);
Residual residual(const StageVector& u, const SchemeState& state,
                  ResidualNorm kind = ResidualNorm::l2);

/// Fully expanded chemical potential at the half step.
CellField mu_of(const CellField& phi_new, const SchemeState& state);

/// Coefficients of the scheme's pointwise algebra, shared with the smoother.
/// After freezing the quadratic factor of the nonlinear term at the current
/// iterate phi_n, nonlinear(phi, phi_k) ~= picard_slope * phi + picard_offset.
struct PointwiseCoefficients {
  double linear;       ///< (1-eps)/2 or (1-eps)
  double omega_scale;  ///< 1/2 or 1, the factor of lap phi in row 3
  SchemeKind kind;

  double nonlinear(double phi, double phi_k) const {
    return kind == SchemeKind::crank_nicolson ? 0.25 * (phi + phi_k) * (phi * phi + phi_k * phi_k)
                                              : phi * phi * phi;
  }
  double picard_slope(double phi_n, double phi_k) const {
    return kind == SchemeKind::crank_nicolson ? 0.25 * (phi_n * phi_n + phi_k * phi_k)
                                              : phi_n * phi_n;
  }
  double picard_offset(double phi_n, double phi_k) const {
    return kind == SchemeKind::crank_nicolson ? picard_slope(phi_n, phi_k) * phi_k : 0.0;
  }
};

PointwiseCoefficients pointwise_coefficients(const SchemeState& state);

/// Initial guess phi = phi^k, omega = lap phi^k, mu = mu_of(phi^k).
StageVector default_initial_guess(const SchemeState& state);

}  // namespace pfc3d
