#pragma once

// Independent reference implementations for tests. Everything here is
// written directly from the pointwise formulas with explicit index wrapping
// and plain loops, without calling the library's stencil or reduction code.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "pfc3d/grid.hpp"

namespace testing {

using pfc3d::CellField;
using pfc3d::GridSpec;

inline std::uint64_t next_u64(std::mt19937_64& g) { return g(); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
}

inline CellField random_field(const GridSpec& spec, std::mt19937_64& g, double lo = -1.0, double hi = 1.0) {
  CellField f(spec);
  for (double& v : f.values()) v = uniform(g, lo, hi);
  return f;
}

/// Band-limited random field: a few low Fourier modes around `base`.
inline CellField smooth_random_field(const GridSpec& spec, std::mt19937_64& g, double base, double amp) {
  CellField f(spec, base);
  const double w = 2.0 * std::numbers::pi / spec.L();
  for (int mode = 0; mode < 4; ++mode) {
    const int a = static_cast<int>(g() % 2), b = static_cast<int>(g() % 2), c = 1;
    const double px = uniform(g, 0, 2 * std::numbers::pi), py = uniform(g, 0, 2 * std::numbers::pi), pz = uniform(g, 0, 2 * std::numbers::pi);
    const double coef = amp * uniform(g, -1.0, 1.0) / 4.0;
    for (int i = 1; i <= spec.m(); ++i)
      for (int j = 1; j <= spec.m(); ++j)
        for (int k = 1; k <= spec.m(); ++k)
          f(i, j, k) += coef * std::cos(a * w * spec.center(i) + px) * std::cos(b * w * spec.center(j) + py) *
                        std::cos(c * w * spec.center(k) + pz);
  }
  return f;
}

/// Copy of a field's values; safe to iterate when the field is a temporary.
template <class Field>
std::vector<double> values_of(const Field& f) {
  return {f.values().begin(), f.values().end()};
}

inline int wrap(int i, int m) { return ((i - 1) % m + m) % m + 1; }

/// Value at 1-based index shifted by (di, dj, dk) with explicit wrapping.
inline double at(const CellField& f, int i, int j, int k, int di = 0, int dj = 0, int dk = 0) {
  const int m = f.spec().m();
  const int ii = wrap(i + di, m) - 1, jj = wrap(j + dj, m) - 1, kk = wrap(k + dk, m) - 1;
  return f.values()[(static_cast<std::size_t>(ii) * m + jj) * m + kk];
}

inline CellField naive_laplacian(const CellField& f) {
  const int m = f.spec().m();
  const double h2 = f.spec().h() * f.spec().h();
  CellField out(f.spec());
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      for (int k = 1; k <= m; ++k) {
        const double s = at(f, i, j, k, 1, 0, 0) + at(f, i, j, k, -1, 0, 0) + at(f, i, j, k, 0, 1, 0) +
                         at(f, i, j, k, 0, -1, 0) + at(f, i, j, k, 0, 0, 1) + at(f, i, j, k, 0, 0, -1);
        out.values()[(static_cast<std::size_t>(i - 1) * m + (j - 1)) * m + (k - 1)] =
            (s - 6.0 * at(f, i, j, k)) / h2;
      }
  return out;
}

inline double naive_inner(const CellField& f, const CellField& g) {
  long double s = 0;
  for (std::size_t n = 0; n < f.size(); ++n) s += static_cast<long double>(f.values()[n]) * g.values()[n];
  const double h = f.spec().h();
  return static_cast<double>(s) * h * h * h;
}

/// Sum over all faces of all axes of (forward difference)^2, times h^3.
inline double naive_grad_sq(const CellField& f) {
  const int m = f.spec().m();
  const double h = f.spec().h();
  long double s = 0;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      for (int k = 1; k <= m; ++k) {
        const double c = at(f, i, j, k);
        const double dx = (at(f, i, j, k, 1, 0, 0) - c) / h;
        const double dy = (at(f, i, j, k, 0, 1, 0) - c) / h;
        const double dz = (at(f, i, j, k, 0, 0, 1) - c) / h;
        s += dx * dx + dy * dy + dz * dz;
      }
  return static_cast<double>(s) * h * h * h;
}

inline double naive_energy(const CellField& phi, double eps) {
  long double quart = 0, sq = 0;
  for (double v : phi.values()) {
    quart += static_cast<long double>(v) * v * v * v;
    sq += static_cast<long double>(v) * v;
  }
  const double h3 = std::pow(phi.spec().h(), 3);
  const CellField lap = naive_laplacian(phi);
  return 0.25 * static_cast<double>(quart) * h3 + 0.5 * (1.0 - eps) * static_cast<double>(sq) * h3 -
         naive_grad_sq(phi) + 0.5 * naive_inner(lap, lap);
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::fabs(a), std::fabs(b));
  return s == 0 ? 0 : std::fabs(a - b) / s;
}

inline double max_abs_diff(const CellField& a, const CellField& b) {
  double e = 0;
  for (std::size_t n = 0; n < a.size(); ++n) e = std::max(e, std::fabs(a.values()[n] - b.values()[n]));
  return e;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static int counter = 0;
  auto p = std::filesystem::temp_directory_path() /
           ("pfc3d_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
