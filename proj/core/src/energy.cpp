#include "pfc3d/energy.hpp"

#include <cmath>

#include "pfc3d/error.hpp"

namespace pfc3d {

bool EnergyParams::validate() const {
  if (!std::isfinite(epsilon)) throw ContractError("epsilon must be finite");
  return epsilon > 0.0 && epsilon < 1.0;
}

double discrete_energy(const CellField& phi, const EnergyParams& p) {
  const double l2_sq = inner_product(phi, phi);
  const CellField lap = laplacian(phi);
  return 0.25 * norm_p_pow(phi, 4.0) + 0.5 * (1.0 - p.epsilon) * l2_sq - grad_norm_sq(phi) +
         0.5 * inner_product(lap, lap);
}

double modified_energy(const CellField& curr, const CellField& prev, const EnergyParams& p) {
  require_same_grid(curr.spec(), prev.spec(), "modified_energy");
  return discrete_energy(curr, p) + 0.5 * grad_norm_sq(curr - prev);
}

CoercivityPair coercivity_bound(const CellField& phi, const EnergyParams& p) {
  return {discrete_energy(phi, p) + 0.25 * phi.spec().volume(), norm_22_sq(phi)};
}

}  // namespace pfc3d
