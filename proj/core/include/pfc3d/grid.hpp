#pragma once

// Periodic cell-centered grid functions on the cube [0, L]^3 and the
// discrete difference/average calculus acting on them.
//
// Cell (i, j, k), 1 <= i, j, k <= m, has its center at ((i-1/2)h, (j-1/2)h,
// (k-1/2)h). A face field on axis x stores the value at face i+1/2 in slot i,
// so the periodic face 1/2 is the same slot as face m+1/2.

#include <cstddef>
#include <span>
#include <vector>

namespace pfc3d {

enum class Axis { x = 0, y = 1, z = 2 };

inline constexpr Axis kAxes[3] = {Axis::x, Axis::y, Axis::z};

const char* axis_name(Axis a);

class GridSpec {
 public:
  GridSpec(int m, double L);

  int m() const { return m_; }
  double L() const { return L_; }
  double h() const { return h_; }
  std::size_t cells() const { return static_cast<std::size_t>(m_) * m_ * m_; }
  double volume() const { return L_ * L_ * L_; }
  double cell_volume() const { return h_ * h_ * h_; }

  /// Cell-center coordinate of 1-based index i.
  double center(int i) const { return (i - 0.5) * h_; }

  /// Wraps any integer index (1-based convention) into [0, m).
  int wrap0(int i) const {
    int r = (i - 1) % m_;
    return r < 0 ? r + m_ : r;
  }

  /// Storage offset of 0-based (i, j, k); k is the fastest index.
  std::size_t offset0(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * m_ + j) * m_ + k;
  }

  /// Storage offset of 1-based periodic (i, j, k).
  std::size_t offset(int i, int j, int k) const {
    return offset0(wrap0(i), wrap0(j), wrap0(k));
  }

  /// Offset change for a +1 step along an axis in storage order.
  std::size_t stride(Axis a) const;

  bool operator==(const GridSpec& o) const { return m_ == o.m_ && L_ == o.L_; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }

 private:
  int m_;
  double L_;
  double h_;
};

/// Per-axis periodic neighbor tables in 0-based indices.
struct NeighborTable {
  explicit NeighborTable(int m);
  std::vector<int> plus;
  std::vector<int> minus;
};

/// Real grid function in the space of periodic cell-centered functions.
class CellField {
 public:
  explicit CellField(const GridSpec& spec, double value = 0.0);
  CellField(const GridSpec& spec, std::vector<double> values);

  const GridSpec& spec() const { return spec_; }

  /// 1-based periodic access.
  double& operator()(int i, int j, int k) { return v_[spec_.offset(i, j, k)]; }
  double operator()(int i, int j, int k) const { return v_[spec_.offset(i, j, k)]; }

  double& at0(int i, int j, int k) { return v_[spec_.offset0(i, j, k)]; }
  double at0(int i, int j, int k) const { return v_[spec_.offset0(i, j, k)]; }

  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::size_t size() const { return v_.size(); }

  bool all_finite() const;
  void fill(double value);

  CellField& operator+=(const CellField& o);
  CellField& operator-=(const CellField& o);
  CellField& operator*=(double s);

 private:
  GridSpec spec_;
  std::vector<double> v_;
};

CellField operator+(CellField a, const CellField& b);
CellField operator-(CellField a, const CellField& b);
CellField operator*(double s, CellField a);

/// Real function on the faces normal to one axis.
class FaceField {
 public:
  FaceField(const GridSpec& spec, Axis axis, double value = 0.0);

  const GridSpec& spec() const { return spec_; }
  Axis axis() const { return axis_; }

  /// Value at face (i+1/2, j, k) for axis x (analogous for y, z); 1-based periodic.
  double& operator()(int i, int j, int k) { return v_[spec_.offset(i, j, k)]; }
  double operator()(int i, int j, int k) const { return v_[spec_.offset(i, j, k)]; }

  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::size_t size() const { return v_.size(); }

 private:
  GridSpec spec_;
  Axis axis_;
  std::vector<double> v_;
};

// ---------------------------------------------------------------------------
// Operators

/// D_a f: divided difference from cells to faces.
FaceField face_difference(const CellField& f, Axis axis);
/// A_a f: midpoint average from cells to faces.
FaceField face_average(const CellField& f, Axis axis);
/// d_a g: divided difference from faces back to cells. If `expected` is
/// given, g must carry that axis.
CellField cell_difference(const FaceField& g);
CellField cell_difference(const FaceField& g, Axis expected);
/// a_a g: midpoint average from faces back to cells.
CellField cell_average(const FaceField& g);
CellField cell_average(const FaceField& g, Axis expected);

/// Seven-point periodic Laplacian.
CellField laplacian(const CellField& f);
void laplacian_into(const CellField& f, CellField& out);

/// Cell-wise product.
CellField pointwise_product(const CellField& f, const CellField& g);

// ---------------------------------------------------------------------------
// Reductions. All accumulate in extended precision with compensated summation.

/// h^3 sum f g.
double inner_product(const CellField& f, const CellField& g);
/// [f, g]_a = (a_a(f g), 1); equals h^3 sum f g on the periodic grid.
double face_inner_product(const FaceField& f, const FaceField& g);
/// sum over axes of [D_a f, D_a g]_a.
double grad_inner_product(const CellField& f, const CellField& g);

/// ||f||_p with p in {1, 2, 4} (any p >= 1 is accepted).
double norm_p(const CellField& f, double p);
/// ||f||_p^p = (|f|^p, 1).
double norm_p_pow(const CellField& f, double p);
double norm_inf(const CellField& f);
double grad_norm_sq(const CellField& f);
/// ||f||_2^2 + ||grad f||_2^2 + ||lap f||_2^2.
double norm_22_sq(const CellField& f);
double norm_22(const CellField& f);
double mean(const CellField& f);
/// Plain (unweighted) sum of cell values.
double sum(const CellField& f);

/// Throws ContractError if GridSpecs differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace pfc3d
