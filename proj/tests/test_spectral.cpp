#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pfc3d/error.hpp"
#include "pfc3d/spectral.hpp"
#include "support.hpp"

using namespace pfc3d;

namespace {

CellField cos_mode(const GridSpec& g, int r) {
  CellField f(g);
  for (int i = 1; i <= g.m(); ++i)
    for (int j = 1; j <= g.m(); ++j)
      for (int k = 1; k <= g.m(); ++k) f(i, j, k) = std::cos(2 * std::numbers::pi * r * g.center(i) / g.L());
  return f;
}

// Direct O(m^6) transform straight from the definition.
std::complex<double> naive_coefficient(const CellField& f, int r, int s, int t) {
  const GridSpec& g = f.spec();
  const int m = g.m();
  std::complex<double> acc = 0;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      for (int k = 1; k <= m; ++k) {
        const double arg = -2 * std::numbers::pi * (r * g.center(i) + s * g.center(j) + t * g.center(k)) / g.L();
        acc += f(i, j, k) * std::polar(1.0, arg);
      }
  return acc / static_cast<double>(m * m * m);
}

}  // namespace

TEST_CASE("dft of a constant") {
  const GridSpec g(5, 3.2);
  const SpectralField s = dft3(CellField(g, 0.7));
  CHECK(s.R() == 2);
  for (int r = -2; r <= 2; ++r)
    for (int q = -2; q <= 2; ++q)
      for (int t = -2; t <= 2; ++t) {
        const double expected = (r == 0 && q == 0 && t == 0) ? 0.7 : 0.0;
        CHECK(std::abs(s(r, q, t) - expected) < 1e-13);
      }
}

TEST_CASE("dft of a single cosine mode") {
  const GridSpec g(9, 2.0);
  const SpectralField s = dft3(cos_mode(g, 1));
  for (int r = -4; r <= 4; ++r)
    for (int q = -4; q <= 4; ++q)
      for (int t = -4; t <= 4; ++t) {
        const double expected = (std::abs(r) == 1 && q == 0 && t == 0) ? 0.5 : 0.0;
        CHECK(std::abs(s(r, q, t) - expected) < 1e-13);
      }
}

TEST_CASE("dft matches the direct definition and is conjugate symmetric") {
  std::mt19937_64 rng(31);
  const GridSpec g(5, 1.7);
  const CellField f = testing::random_field(g, rng);
  const SpectralField s = dft3(f);
  for (int r = -2; r <= 2; ++r)
    for (int q = -2; q <= 2; ++q)
      for (int t = -2; t <= 2; ++t) {
        CHECK(std::abs(s(r, q, t) - naive_coefficient(f, r, q, t)) < 1e-14);
        CHECK(std::abs(s(-r, -q, -t) - std::conj(s(r, q, t))) < 1e-14);
      }
}

TEST_CASE("dft rejects even grids") { CHECK_THROWS_AS(dft3(CellField(GridSpec(8, 1.0))), ContractError); }

TEST_CASE("Parseval identities on random fields") {
  std::mt19937_64 rng(37);
  const GridSpec g(9, 3.2);
  for (int n = 0; n < 5; ++n) {
    const CellField f = testing::random_field(g, rng);
    const SpectralField s = dft3(f);
    CHECK(testing::rel_diff(parseval_l2_sq(s), testing::naive_inner(f, f)) < 1e-12);
    for (Axis a : kAxes) {
      const FaceField d = face_difference(f, a);
      CHECK(testing::rel_diff(parseval_difference_sq(s, a), face_inner_product(d, d)) < 1e-11);
      const CellField dd = cell_difference(d, a);
      CHECK(testing::rel_diff(parseval_second_difference_sq(s, a), inner_product(dd, dd)) < 1e-11);
    }
  }
}

TEST_CASE("derivative Parseval for a cosine mode uses the discrete symbol") {
  const GridSpec g(9, 3.2);
  const CellField f = cos_mode(g, 2);
  const double u = 2 * std::sin(std::numbers::pi * 2 * g.h() / g.L()) / g.h();
  // Two coefficients of size 1/2.
  const double expected = g.volume() * u * u * 0.5;
  const SpectralField s = dft3(f);
  CHECK(parseval_difference_sq(s, Axis::x) == doctest::Approx(expected).epsilon(1e-12));
  const FaceField d = face_difference(f, Axis::x);
  CHECK(face_inner_product(d, d) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(parseval_difference_sq(s, Axis::y) < 1e-20);
}

TEST_CASE("symbol bounds") {
  for (int R : {4, 8, 16}) {
    const double L = 3.2;
    const auto sym = symbol_bounds(R, L, L / (2 * R + 1));
    CHECK(sym.size() == static_cast<std::size_t>(2 * R + 1));
    for (const auto& p : sym) {
      if (p.r == 0) {
        CHECK(p.discrete == 0.0);
        CHECK(p.continuous == 0.0);
        continue;
      }
      CHECK(p.discrete <= p.continuous);
      CHECK(p.discrete >= 2 / std::numbers::pi * p.continuous);
    }
    const auto& top = sym.back();
    CHECK(top.r == R);
    const double x = std::numbers::pi * R / (2 * R + 1);
    CHECK(top.discrete / top.continuous == doctest::Approx(std::sin(x) / x).epsilon(1e-13));
    CHECK(top.discrete / top.continuous >= 2 / std::numbers::pi);
  }
  CHECK_THROWS_AS(symbol_bounds(4, 3.2, 0.5), ContractError);
}

TEST_CASE("H2 comparison for a constant") {
  const GridSpec g(5, 3.2);
  const double c = 0.3;
  const H2Comparison h = h2_embedding_check(CellField(g, c));
  CHECK(h.h2_interpolant_sq == doctest::Approx(c * c * g.volume()).epsilon(1e-12));
  CHECK(h.bound_sq == doctest::Approx(2 * std::pow(std::numbers::pi / 2, 4) * c * c * g.volume()).epsilon(1e-12));
  CHECK(h.bound_sq / h.h2_interpolant_sq == doctest::Approx(2 * std::pow(std::numbers::pi / 2, 4)).epsilon(1e-12));
  CHECK(h.linf == doctest::Approx(c));
}

TEST_CASE("H2 comparison for a single mode agrees with grid quantities") {
  const GridSpec g(9, 3.2);
  const CellField f = cos_mode(g, 1);
  const H2Comparison h = h2_embedding_check(f);
  const double v = 2 * std::numbers::pi / g.L();
  const double l2 = 0.5 * g.volume();
  CHECK(h.h2_interpolant_sq == doctest::Approx(l2 * (1 + v * v + v * v * v * v)).epsilon(1e-11));
  CHECK(h.l2_grid_sq == doctest::Approx(h.l2_spectral_sq).epsilon(1e-11));
  CHECK(h.bound_sq == doctest::Approx(2 * std::pow(std::numbers::pi / 2, 4) * norm_22_sq(f)).epsilon(1e-12));
  CHECK(h.h2_interpolant_sq <= h.bound_sq);
}

TEST_CASE("H2 inequality on random fields") {
  std::mt19937_64 rng(41);
  for (int m : {5, 9, 17})
    for (int n = 0; n < 10; ++n) {
      const H2Comparison h = h2_embedding_check(testing::random_field(GridSpec(m, 3.2), rng));
      CHECK(h.h2_interpolant_sq <= h.bound_sq);
      CHECK(h.sobolev_ratio > 0);
    }
}

TEST_CASE("interpolant reproduces grid values and bounds the max norm") {
  std::mt19937_64 rng(43);
  const GridSpec g(7, 2.0);
  const CellField f = testing::random_field(g, rng);
  const SpectralField s = dft3(f);
  std::vector<double> xs;
  for (int i = 1; i <= 7; ++i) xs.push_back(g.center(i));
  const auto vals = evaluate_interpolant(s, xs);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      for (int k = 0; k < 7; ++k) CHECK(std::fabs(vals[(i * 7 + j) * 7 + k] - f.at0(i, j, k)) < 1e-12);

  std::vector<double> fine;
  for (int i = 0; i < 28; ++i) fine.push_back(g.center(i / 4 + 1) + (i % 4) * g.h() / 4);
  double fmax = 0;
  for (double v : evaluate_interpolant(s, fine)) fmax = std::max(fmax, std::fabs(v));
  CHECK(norm_inf(f) <= fmax + 1e-12);
}

TEST_CASE("interpolant evaluates between cell centers") {
  const GridSpec g(9, 3.2);
  const SpectralField s = dft3(cos_mode(g, 1));
  const std::vector<double> xs = {0.0, 0.8, 1.6};
  const auto vals = evaluate_interpolant(s, xs);
  // Constant in y and z; x varies slowest.
  for (int p = 0; p < 3; ++p)
    CHECK(vals[(p * 3 + 1) * 3 + 2] == doctest::Approx(std::cos(2 * std::numbers::pi * xs[p] / 3.2)).epsilon(1e-12).scale(1));
}
