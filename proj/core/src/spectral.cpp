#include "pfc3d/spectral.hpp"

#include <cmath>
#include <numbers>

#include "pfc3d/error.hpp"
#include "pfc3d/summation.hpp"

namespace pfc3d {

using cplx = std::complex<double>;

SpectralField::SpectralField(int R, double L)
    : R_(R), L_(L), c_(static_cast<std::size_t>(2 * R + 1) * (2 * R + 1) * (2 * R + 1)) {
  if (R < 1) throw ContractError("SpectralField: R must be >= 1");
}

namespace {

// out(.., a, ..) = sum_b table[a][b] * in(.., b, ..) along one axis of an
// m^3 array stored [p][q][w] with w fastest.
void transform_axis(std::vector<cplx>& data, int m, const std::vector<cplx>& table, int axis) {
  std::vector<cplx> out(data.size());
  auto at = [m](int p, int q, int w) { return (static_cast<std::size_t>(p) * m + q) * m + w; };
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int w = 0; w < m; ++w) {
        const int o[3] = {p, q, w};
        cplx acc = 0.0;
        for (int b = 0; b < m; ++b) {
          int src[3] = {p, q, w};
          src[axis] = b;
          acc += table[static_cast<std::size_t>(o[axis]) * m + b] * data[at(src[0], src[1], src[2])];
        }
        out[at(p, q, w)] = acc;
      }
  data.swap(out);
}

double symbol_u(int r, double L, double h) {
  return 2.0 * std::fabs(std::sin(std::numbers::pi * r * h / L)) / h;
}

double symbol_v(int r, double L) { return 2.0 * std::numbers::pi * std::abs(r) / L; }

}  // namespace

SpectralField dft3(const CellField& f) {
  const GridSpec& g = f.spec();
  const int m = g.m();
  if (m % 2 == 0) throw ContractError("dft3: only odd m = 2R+1 is supported");
  const int R = (m - 1) / 2;
  const double L = g.L();

  // table[r + R][i] = exp(-2 pi i r x_i / L) / m
  std::vector<cplx> table(static_cast<std::size_t>(m) * m);
  for (int r = -R; r <= R; ++r)
    for (int i = 0; i < m; ++i) {
      const double arg = -2.0 * std::numbers::pi * r * g.center(i + 1) / L;
      table[static_cast<std::size_t>(r + R) * m + i] = std::polar(1.0 / m, arg);
    }

  std::vector<cplx> data(f.values().begin(), f.values().end());
  for (int axis = 2; axis >= 0; --axis) transform_axis(data, m, table, axis);

  SpectralField s(R, L);
  for (int r = -R; r <= R; ++r)
    for (int q = -R; q <= R; ++q)
      for (int t = -R; t <= R; ++t)
        s(r, q, t) = data[(static_cast<std::size_t>(r + R) * m + (q + R)) * m + (t + R)];
  return s;
}

std::vector<double> evaluate_interpolant(const SpectralField& s, std::span<const double> xs) {
  const int m = s.m();
  const int R = s.R();
  const int n = static_cast<int>(xs.size());
  // table[p][r + R] = exp(2 pi i r xs[p] / L)
  std::vector<cplx> table(static_cast<std::size_t>(n) * m);
  for (int p = 0; p < n; ++p)
    for (int r = -R; r <= R; ++r)
      table[static_cast<std::size_t>(p) * m + (r + R)] =
          std::polar(1.0, 2.0 * std::numbers::pi * r * xs[p] / s.L());

  std::vector<cplx> data(s.coefficients().begin(), s.coefficients().end());
  // Transform the last axis first so the intermediate arrays have mixed sizes
  // [m][m][n] -> [m][n][n] -> [n][n][n].
  {
    std::vector<cplx> out(static_cast<std::size_t>(m) * m * n);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int p = 0; p < n; ++p) {
          cplx acc = 0.0;
          for (int t = 0; t < m; ++t)
            acc += table[static_cast<std::size_t>(p) * m + t] * data[(static_cast<std::size_t>(a) * m + b) * m + t];
          out[(static_cast<std::size_t>(a) * m + b) * n + p] = acc;
        }
    data.swap(out);
  }
  {
    std::vector<cplx> out(static_cast<std::size_t>(m) * n * n);
    for (int a = 0; a < m; ++a)
      for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p) {
          cplx acc = 0.0;
          for (int b = 0; b < m; ++b)
            acc += table[static_cast<std::size_t>(q) * m + b] * data[(static_cast<std::size_t>(a) * m + b) * n + p];
          out[(static_cast<std::size_t>(a) * n + q) * n + p] = acc;
        }
    data.swap(out);
  }
  std::vector<double> values(static_cast<std::size_t>(n) * n * n);
  for (int w = 0; w < n; ++w)
    for (int q = 0; q < n; ++q)
      for (int p = 0; p < n; ++p) {
        cplx acc = 0.0;
        for (int a = 0; a < m; ++a)
          acc += table[static_cast<std::size_t>(w) * m + a] * data[(static_cast<std::size_t>(a) * n + q) * n + p];
        values[(static_cast<std::size_t>(w) * n + q) * n + p] = acc.real();
      }
  return values;
}

std::vector<SymbolPair> symbol_bounds(int R, double L, double h) {
  if (R < 1) throw ContractError("symbol_bounds: R must be >= 1");
  if (std::fabs(h * (2 * R + 1) - L) > 1e-12 * L) {
    throw ContractError("symbol_bounds: h must equal L/(2R+1)");
  }
  std::vector<SymbolPair> out;
  out.reserve(2 * R + 1);
  for (int r = -R; r <= R; ++r) out.push_back({r, symbol_u(r, L, h), symbol_v(r, L)});
  return out;
}

namespace {

// L^3 sum weight(r, s, t) |c_{rst}|^2
template <class W>
double weighted_parseval(const SpectralField& s, W weight) {
  const int R = s.R();
  CompensatedSum acc;
  for (int r = -R; r <= R; ++r)
    for (int q = -R; q <= R; ++q)
      for (int t = -R; t <= R; ++t) acc += weight(r, q, t) * std::norm(s(r, q, t));
  return static_cast<double>(acc.value()) * s.L() * s.L() * s.L();
}

int component(Axis a, int r, int s, int t) {
  return a == Axis::x ? r : (a == Axis::y ? s : t);
}

}  // namespace

double parseval_l2_sq(const SpectralField& s) {
  return weighted_parseval(s, [](int, int, int) { return 1.0; });
}

double parseval_difference_sq(const SpectralField& s, Axis a) {
  const double L = s.L(), h = s.h();
  return weighted_parseval(s, [&](int r, int q, int t) {
    const double u = symbol_u(component(a, r, q, t), L, h);
    return u * u;
  });
}

double parseval_second_difference_sq(const SpectralField& s, Axis a) {
  const double L = s.L(), h = s.h();
  return weighted_parseval(s, [&](int r, int q, int t) {
    const double u = symbol_u(component(a, r, q, t), L, h);
    return u * u * u * u;
  });
}

H2Comparison h2_embedding_check(const CellField& f) {
  const SpectralField s = dft3(f);
  const double L = s.L();
  // |f_F|^2_{H^2} = L^3 sum (1 + |v|^2 + |v|^4) |c|^2 with |v|^2 = v_r^2 + v_s^2 + v_t^2;
  // the |v|^4 term is sum_{a,b} ||d_a d_b f_F||^2.
  const double h2 = weighted_parseval(s, [&](int r, int q, int t) {
    const double v2 = symbol_v(r, L) * symbol_v(r, L) + symbol_v(q, L) * symbol_v(q, L) +
                      symbol_v(t, L) * symbol_v(t, L);
    return 1.0 + v2 + v2 * v2;
  });
  const double n22 = norm_22_sq(f);
  const double half_pi = std::numbers::pi / 2.0;
  const double bound = 2.0 * std::pow(half_pi, 4) * n22;
  const double linf = norm_inf(f);
  return {h2, bound, linf, inner_product(f, f), parseval_l2_sq(s),
          n22 > 0.0 ? linf / std::sqrt(n22) : 0.0};
}

}  // namespace pfc3d
