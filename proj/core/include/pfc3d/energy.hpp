#pragma once

#include "pfc3d/grid.hpp"

namespace pfc3d {

struct EnergyParams {
  double epsilon;

  /// Throws ContractError if epsilon is not finite. Returns false (and the
  /// caller may warn) when epsilon lies outside (0, 1).
  bool validate() const;
};

/// F_h(phi) = 1/4||phi||_4^4 + (1-eps)/2||phi||_2^2 - ||grad phi||_2^2 + 1/2||lap phi||_2^2
double discrete_energy(const CellField& phi, const EnergyParams& p);

/// F_h(curr) + 1/2 ||grad (curr - prev)||_2^2; never increases along the scheme.
double modified_energy(const CellField& curr, const CellField& prev, const EnergyParams& p);

struct CoercivityPair {
  double lhs;  ///< F_h(phi) + L^3/4
  double rhs;  ///< ||phi||_{2,2}^2
};

/// Both sides of F_h(phi) >= C ||phi||_{2,2}^2 - L^3/4, for estimating C empirically.
CoercivityPair coercivity_bound(const CellField& phi, const EnergyParams& p);

}  // namespace pfc3d
