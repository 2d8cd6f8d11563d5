#pragma once

// Randomized property suites over the operator calculus, the discrete energy
// and the Fourier machinery. Each property counts its individual checks and
// failures and keeps the worst observed margin.

#include <cstdint>
#include <string>
#include <vector>

namespace pfc3d {

struct PropertyResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  /// Largest relative error, or the extreme ratio for inequalities.
  double worst = 0.0;
  std::string note;

  bool passed() const { return checks > 0 && failures == 0; }
};

struct SuiteResult {
  std::string name;
  std::vector<PropertyResult> properties;

  int checks() const;
  int failures() const;
  bool passed() const;
  const PropertyResult* find(const std::string& property) const;
};

struct SuiteOptions {
  int instances = 0;
  std::vector<int> grids;
  std::uint64_t seed = 20240607;
};

/// Summation by parts, the interpolation inequality for several alpha,
/// coercivity of the energy, periodicity and mean preservation of the
/// Laplacian. Defaults: 100 instances on m in {3, 4, 8}.
SuiteResult verify_operator_calculus(SuiteOptions options = {});

/// Evenness, lattice symmetry and shift invariance of F_h, and
/// modified_energy >= F_h. Defaults: 20 instances on m in {4, 5}.
SuiteResult verify_energy(SuiteOptions options = {});

/// Parseval identities, symbol bounds, the H^2 comparison and interpolation
/// at cell centers. Defaults: 200 instances on m in {5, 9, 17}.
SuiteResult verify_spectral(SuiteOptions options = {});

/// Plain-text summary, one line per property and a total line.
std::string format_suite(const SuiteResult& suite);

}  // namespace pfc3d
