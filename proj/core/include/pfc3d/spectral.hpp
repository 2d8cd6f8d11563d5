#pragma once

// Trigonometric interpolation of odd-sized periodic grid functions and the
// Parseval identities that tie grid norms to Fourier coefficients.
//
// For m = 2R+1 the coefficients c_{rst}, -R <= r, s, t <= R, satisfy
//   f_{ijk} = sum c_{rst} exp(2 pi i (r x_i + s y_j + t z_k) / L)
// at the cell centers, and the interpolant f_F(x, y, z) is the same sum
// evaluated anywhere. The difference operator D_x acts with symbol
// u_r = 2i sin(pi r h / L) / h, the derivative with v_r = 2 i pi r / L.

#include <complex>
#include <span>
#include <vector>

#include "pfc3d/grid.hpp"

namespace pfc3d {

class SpectralField {
 public:
  SpectralField(int R, double L);

  int R() const { return R_; }
  int m() const { return 2 * R_ + 1; }
  double L() const { return L_; }
  double h() const { return L_ / m(); }

  std::complex<double>& operator()(int r, int s, int t) { return c_[index(r, s, t)]; }
  const std::complex<double>& operator()(int r, int s, int t) const { return c_[index(r, s, t)]; }
  std::span<const std::complex<double>> coefficients() const { return c_; }

 private:
  std::size_t index(int r, int s, int t) const {
    const std::size_t n = static_cast<std::size_t>(m());
    return (static_cast<std::size_t>(r + R_) * n + (s + R_)) * n + (t + R_);
  }
  int R_;
  double L_;
  std::vector<std::complex<double>> c_;
};

/// Forward transform. Throws ContractError for even m.
SpectralField dft3(const CellField& f);

/// Real part of the interpolant on the tensor grid xs^3 (k fastest).
std::vector<double> evaluate_interpolant(const SpectralField& s, std::span<const double> xs);

struct SymbolPair {
  int r;
  double discrete;    ///< |u_r|
  double continuous;  ///< |v_r|
};

/// |u_r| and |v_r| for r in [-R, R]. Requires h = L/(2R+1).
std::vector<SymbolPair> symbol_bounds(int R, double L, double h);

/// L^3 sum |c|^2.
double parseval_l2_sq(const SpectralField& s);
/// L^3 sum |u_a|^2 |c|^2, the spectral side of [D_a f, D_a f]_a.
double parseval_difference_sq(const SpectralField& s, Axis a);
/// L^3 sum |u_a|^4 |c|^2, the spectral side of ||d_a D_a f||_2^2.
double parseval_second_difference_sq(const SpectralField& s, Axis a);

struct H2Comparison {
  /// ||f_F||_{H^2}^2 including all mixed second derivatives.
  double h2_interpolant_sq;
  /// 2 (pi/2)^4 ||f||_{2,2}^2.
  double bound_sq;
  double linf;
  /// ||f||_2^2 on the grid and L^3 sum |c|^2.
  double l2_grid_sq;
  double l2_spectral_sq;
  /// Empirical ||f||_inf / ||f||_{2,2}.
  double sobolev_ratio;
};

H2Comparison h2_embedding_check(const CellField& f);

}  // namespace pfc3d
