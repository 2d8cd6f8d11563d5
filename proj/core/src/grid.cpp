#include "pfc3d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pfc3d/error.hpp"
#include "pfc3d/parallel.hpp"
#include "pfc3d/summation.hpp"

namespace pfc3d {

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

GridSpec::GridSpec(int m, double L) : m_(m), L_(L), h_(L / m) {
  if (m < 2) throw ContractError("GridSpec: m must be >= 2");
  if (!(L > 0.0) || !std::isfinite(L)) throw ContractError("GridSpec: L must be positive and finite");
}

std::size_t GridSpec::stride(Axis a) const {
  switch (a) {
    case Axis::x: return static_cast<std::size_t>(m_) * m_;
    case Axis::y: return static_cast<std::size_t>(m_);
    case Axis::z: return 1;
  }
  return 0;
}

NeighborTable::NeighborTable(int m) : plus(m), minus(m) {
  for (int i = 0; i < m; ++i) {
    plus[i] = (i + 1) % m;
    minus[i] = (i + m - 1) % m;
  }
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": grid mismatch (m=" << a.m() << ", L=" << a.L() << " vs m=" << b.m()
       << ", L=" << b.L() << ")";
    throw ContractError(os.str());
  }
}

// ---------------------------------------------------------------------------

CellField::CellField(const GridSpec& spec, double value) : spec_(spec), v_(spec.cells(), value) {}

CellField::CellField(const GridSpec& spec, std::vector<double> values)
    : spec_(spec), v_(std::move(values)) {
  if (v_.size() != spec_.cells()) throw ContractError("CellField: value count does not match m^3");
}

bool CellField::all_finite() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

void CellField::fill(double value) { std::fill(v_.begin(), v_.end(), value); }

CellField& CellField::operator+=(const CellField& o) {
  require_same_grid(spec_, o.spec_, "CellField +=");
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += o.v_[n];
  return *this;
}

CellField& CellField::operator-=(const CellField& o) {
  require_same_grid(spec_, o.spec_, "CellField -=");
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] -= o.v_[n];
  return *this;
}

CellField& CellField::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

CellField operator+(CellField a, const CellField& b) { return a += b; }
CellField operator-(CellField a, const CellField& b) { return a -= b; }
CellField operator*(double s, CellField a) { return a *= s; }

FaceField::FaceField(const GridSpec& spec, Axis axis, double value)
    : spec_(spec), axis_(axis), v_(spec.cells(), value) {}

// ---------------------------------------------------------------------------

namespace {

// Applies out[n] = op(f[n], f[n + 1 along axis]) with periodic wrap.
template <class Op>
void cell_to_face(const CellField& f, FaceField& out, Op op) {
  const GridSpec& g = f.spec();
  const int m = g.m();
  const NeighborTable nb(m);
  const Axis a = out.axis();
  const double* src = f.data();
  double* dst = out.data();
  parallel_for(m, [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const int ip = a == Axis::x ? nb.plus[i] : i;
          const int jp = a == Axis::y ? nb.plus[j] : j;
          const int kp = a == Axis::z ? nb.plus[k] : k;
          dst[g.offset0(i, j, k)] = op(src[g.offset0(i, j, k)], src[g.offset0(ip, jp, kp)]);
        }
  });
}

// out[n] = op(g[n], g[n - 1 along axis]): face i+1/2 and face i-1/2 around cell i.
template <class Op>
void face_to_cell(const FaceField& f, CellField& out, Op op) {
  const GridSpec& g = f.spec();
  const int m = g.m();
  const NeighborTable nb(m);
  const Axis a = f.axis();
  const double* src = f.data();
  double* dst = out.data();
  parallel_for(m, [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const int im = a == Axis::x ? nb.minus[i] : i;
          const int jm = a == Axis::y ? nb.minus[j] : j;
          const int km = a == Axis::z ? nb.minus[k] : k;
          dst[g.offset0(i, j, k)] = op(src[g.offset0(i, j, k)], src[g.offset0(im, jm, km)]);
        }
  });
}

void check_axis(const FaceField& g, Axis expected, const char* what) {
  if (g.axis() != expected) {
    std::ostringstream os;
    os << what << ": face field lives on axis " << axis_name(g.axis()) << " but axis "
       << axis_name(expected) << " was requested";
    throw ContractError(os.str());
  }
}

}  // namespace

FaceField face_difference(const CellField& f, Axis axis) {
  FaceField out(f.spec(), axis);
  const double inv_h = 1.0 / f.spec().h();
  cell_to_face(f, out, [inv_h](double here, double next) { return (next - here) * inv_h; });
  return out;
}

FaceField face_average(const CellField& f, Axis axis) {
  FaceField out(f.spec(), axis);
  cell_to_face(f, out, [](double here, double next) { return 0.5 * (next + here); });
  return out;
}

CellField cell_difference(const FaceField& g) {
  CellField out(g.spec());
  const double inv_h = 1.0 / g.spec().h();
  face_to_cell(g, out, [inv_h](double east, double west) { return (east - west) * inv_h; });
  return out;
}

CellField cell_difference(const FaceField& g, Axis expected) {
  check_axis(g, expected, "cell_difference");
  return cell_difference(g);
}

CellField cell_average(const FaceField& g) {
  CellField out(g.spec());
  face_to_cell(g, out, [](double east, double west) { return 0.5 * (east + west); });
  return out;
}

CellField cell_average(const FaceField& g, Axis expected) {
  check_axis(g, expected, "cell_average");
  return cell_average(g);
}

void laplacian_into(const CellField& f, CellField& out) {
  require_same_grid(f.spec(), out.spec(), "laplacian");
  const GridSpec& g = f.spec();
  const int m = g.m();
  const NeighborTable nb(m);
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const double* s = f.data();
  double* d = out.data();
  parallel_for(m, [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const double c = s[g.offset0(i, j, k)];
          const double sum6 = s[g.offset0(nb.plus[i], j, k)] + s[g.offset0(nb.minus[i], j, k)] +
                              s[g.offset0(i, nb.plus[j], k)] + s[g.offset0(i, nb.minus[j], k)] +
                              s[g.offset0(i, j, nb.plus[k])] + s[g.offset0(i, j, nb.minus[k])];
          d[g.offset0(i, j, k)] = (sum6 - 6.0 * c) * inv_h2;
        }
  });
}

CellField laplacian(const CellField& f) {
  CellField out(f.spec());
  laplacian_into(f, out);
  return out;
}

CellField pointwise_product(const CellField& f, const CellField& g) {
  require_same_grid(f.spec(), g.spec(), "pointwise_product");
  CellField out(f.spec());
  for (std::size_t n = 0; n < f.size(); ++n) out.data()[n] = f.data()[n] * g.data()[n];
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double weighted_dot(const GridSpec& g, const double* a, const double* b, std::size_t n) {
  CompensatedSum acc;
  for (std::size_t q = 0; q < n; ++q) acc += static_cast<long double>(a[q]) * b[q];
  return static_cast<double>(acc.value() * g.cell_volume());
}

}  // namespace

double inner_product(const CellField& f, const CellField& g) {
  require_same_grid(f.spec(), g.spec(), "inner_product");
  return weighted_dot(f.spec(), f.data(), g.data(), f.size());
}

double face_inner_product(const FaceField& f, const FaceField& g) {
  require_same_grid(f.spec(), g.spec(), "face_inner_product");
  if (f.axis() != g.axis()) throw ContractError("face_inner_product: axis mismatch");
  // (a(fg), 1) telescopes to h^3 sum fg on a periodic grid.
  return weighted_dot(f.spec(), f.data(), g.data(), f.size());
}

double grad_inner_product(const CellField& f, const CellField& g) {
  require_same_grid(f.spec(), g.spec(), "grad_inner_product");
  double total = 0.0;
  for (Axis a : kAxes) total += face_inner_product(face_difference(f, a), face_difference(g, a));
  return total;
}

double norm_p(const CellField& f, double p) {
  return std::pow(norm_p_pow(f, p), 1.0 / p);
}

double norm_p_pow(const CellField& f, double p) {
  if (!(p >= 1.0)) throw ContractError("norm_p: p must be >= 1");
  CompensatedSum acc;
  if (p == 2.0) {
    for (double x : f.values()) acc += static_cast<long double>(x) * x;
  } else if (p == 4.0) {
    for (double x : f.values()) {
      const long double x2 = static_cast<long double>(x) * x;
      acc += x2 * x2;
    }
  } else {
    for (double x : f.values()) acc += std::pow(std::fabs(static_cast<long double>(x)), p);
  }
  return static_cast<double>(acc.value() * f.spec().cell_volume());
}

double norm_inf(const CellField& f) {
  double mx = 0.0;
  for (double x : f.values()) mx = std::max(mx, std::fabs(x));
  return mx;
}

double grad_norm_sq(const CellField& f) { return grad_inner_product(f, f); }

double norm_22_sq(const CellField& f) {
  const CellField lap = laplacian(f);
  return inner_product(f, f) + grad_norm_sq(f) + inner_product(lap, lap);
}

double norm_22(const CellField& f) { return std::sqrt(norm_22_sq(f)); }

double sum(const CellField& f) {
  CompensatedSum acc;
  for (double x : f.values()) acc += x;
  return static_cast<double>(acc.value());
}

double mean(const CellField& f) {
  const GridSpec& g = f.spec();
  CompensatedSum acc;
  for (double x : f.values()) acc += x;
  return static_cast<double>(acc.value() / static_cast<long double>(g.cells()));
}

}  // namespace pfc3d
