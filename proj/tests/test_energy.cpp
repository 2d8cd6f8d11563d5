#include <doctest.h>

#include <cmath>
#include <iomanip>

#include "pfc3d/energy.hpp"
#include "pfc3d/error.hpp"
#include "support.hpp"

using namespace pfc3d;

TEST_CASE("energy of the zero field is zero") {
  CHECK(discrete_energy(CellField(GridSpec(8, 3.2)), {0.025}) == 0.0);
}

TEST_CASE("energy of a constant field") {
  const GridSpec g(8, 3.2);
  const double c = 0.2, eps = 0.025;
  const double expected = 32.768 * (0.0004 + 0.0195);
  CHECK(expected == doctest::Approx(0.6520832).epsilon(1e-14));
  CHECK(discrete_energy(CellField(g, c), {eps}) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(discrete_energy(CellField(g, c), {eps}) ==
        doctest::Approx(g.volume() * (std::pow(c, 4) / 4 + (1 - eps) * c * c / 2)).epsilon(1e-13));
}

TEST_CASE("energy matches a naive term-by-term oracle") {
  std::mt19937_64 rng(101);
  for (int n = 0; n < 5; ++n) {
    const GridSpec g(8, 3.2);
    const CellField phi = testing::random_field(g, rng, -0.5, 0.5);
    CHECK(testing::rel_diff(discrete_energy(phi, {0.25}), testing::naive_energy(phi, 0.25)) < 1e-12);
  }
}

TEST_CASE("energy is even and shift invariant") {
  std::mt19937_64 rng(103);
  const GridSpec g(6, 2.0);
  const CellField phi = testing::random_field(g, rng);
  const double e = discrete_energy(phi, {0.1});
  CHECK(discrete_energy(-1.0 * phi, {0.1}) == doctest::Approx(e).epsilon(1e-14));
  CellField s(g);
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j)
      for (int k = 1; k <= 6; ++k) s(i, j, k) = phi(i + 3, j + 1, k - 2);
  CHECK(discrete_energy(s, {0.1}) == doctest::Approx(e).epsilon(1e-13));
}

TEST_CASE("energy is invariant under transposition and reflection of the lattice") {
  std::mt19937_64 rng(107);
  const GridSpec g(5, 1.0);
  const CellField phi = testing::random_field(g, rng);
  const double e = discrete_energy(phi, {0.3});
  CellField t(g), r(g);
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 5; ++j)
      for (int k = 1; k <= 5; ++k) {
        t(i, j, k) = phi(k, i, j);
        r(i, j, k) = phi(6 - i, j, 6 - k);
      }
  CHECK(discrete_energy(t, {0.3}) == doctest::Approx(e).epsilon(1e-13));
  CHECK(discrete_energy(r, {0.3}) == doctest::Approx(e).epsilon(1e-13));
}

TEST_CASE("modified energy") {
  std::mt19937_64 rng(109);
  const GridSpec g(6, 3.2);
  const EnergyParams p{0.025};
  const CellField a = testing::random_field(g, rng), b = testing::random_field(g, rng);
  SUBCASE("equal arguments give the energy") { CHECK(modified_energy(a, a, p) == discrete_energy(a, p)); }
  SUBCASE("constant difference adds nothing") {
    CHECK(modified_energy(CellField(g, 0.3), CellField(g, 0.0), p) ==
          doctest::Approx(discrete_energy(CellField(g, 0.3), p)));
  }
  SUBCASE("composition oracle") {
    const double ref = testing::naive_energy(a, 0.025) + 0.5 * testing::naive_grad_sq(a - b);
    CHECK(testing::rel_diff(modified_energy(a, b, p), ref) < 1e-12);
    CHECK(modified_energy(a, b, p) >= discrete_energy(a, p));
  }
  CHECK_THROWS_AS(modified_energy(a, CellField(GridSpec(4, 3.2)), p), ContractError);
}

TEST_CASE("coercivity pair") {
  const GridSpec g(8, 3.2);
  const EnergyParams p{0.025};
  const CoercivityPair zero = coercivity_bound(CellField(g), p);
  CHECK(zero.lhs == doctest::Approx(g.volume() / 4));
  CHECK(zero.rhs == 0.0);
  const CoercivityPair one = coercivity_bound(CellField(g, 1.0), p);
  CHECK(one.lhs == doctest::Approx(32.3584).epsilon(1e-13));
  CHECK(one.rhs == doctest::Approx(32.768).epsilon(1e-13));
}

TEST_CASE("coercivity ratio stays above a positive floor on random fields") {
  std::mt19937_64 rng(113);
  double worst = 1e300;
  for (int m : {8, 16})
    for (int n = 0; n < 100; ++n) {
      const CellField phi = testing::random_field(GridSpec(m, 3.2), rng, -1.0, 1.0);
      const CoercivityPair cp = coercivity_bound(phi, {0.025});
      CHECK(cp.lhs >= 0.0);
      worst = std::min(worst, cp.lhs / cp.rhs);
    }
  // Regression floor from the observed minimum over this fixed sample.
  CHECK(worst > 0.0);
  CHECK(worst == doctest::Approx(0.465363551).epsilon(1e-8));
  MESSAGE("minimum observed (F_h + L^3/4) / ||phi||_{2,2}^2 = " << std::setprecision(10) << worst);
}

TEST_CASE("epsilon validation") {
  CHECK(EnergyParams{0.025}.validate());
  CHECK_FALSE(EnergyParams{1.5}.validate());
  CHECK_FALSE(EnergyParams{-0.1}.validate());
  CHECK_THROWS_AS(EnergyParams{std::nan("")}.validate(), ContractError);
}
