#include <doctest.h>

#include <cmath>
#include <fstream>

#include "pfc3d/error.hpp"
#include "pfc3d/harness.hpp"
#include "pfc3d/multigrid.hpp"
#include "support.hpp"

using namespace pfc3d;

namespace {

RunConfig small_base() {
  RunConfig c;
  c.m = 4;
  c.L = 3.2;
  c.epsilon = 0.025;
  c.tau = 1e-3;
  c.n_steps = 2;
  c.mg.tol = 1e-10;
  c.mg.coarsest_m = 2;
  return c;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("nearest-neighbour interpolation") {
  const GridSpec g(4, 3.2);
  SUBCASE("constant") {
    const CellField f = nn_interpolate_coarse_to_fine(CellField(g, 0.3), 8);
    CHECK(f.spec().m() == 8);
    CHECK(f.spec().L() == 3.2);
    for (double v : f.values()) CHECK(v == 0.3);
  }
  SUBCASE("single cell fills its eight children") {
    CellField c(g);
    c(2, 3, 4) = 1.0;
    const CellField f = nn_interpolate_coarse_to_fine(c, 8);
    int ones = 0;
    for (int i = 1; i <= 8; ++i)
      for (int j = 1; j <= 8; ++j)
        for (int k = 1; k <= 8; ++k) {
          const bool child = (i + 1) / 2 == 2 && (j + 1) / 2 == 3 && (k + 1) / 2 == 4;
          CHECK(f(i, j, k) == (child ? 1.0 : 0.0));
          ones += f(i, j, k) == 1.0;
        }
    CHECK(ones == 8);
  }
  SUBCASE("restriction is a left inverse") {
    std::mt19937_64 rng(3);
    const CellField c = testing::random_field(g, rng);
    CHECK(testing::max_abs_diff(restrict_cells(nn_interpolate_coarse_to_fine(c, 8)), c) < 1e-15);
  }
  CHECK_THROWS_AS(nn_interpolate_coarse_to_fine(CellField(g), 12), ContractError);
  CHECK_THROWS_AS(nn_interpolate_coarse_to_fine(CellField(g), 4), ContractError);
}

TEST_CASE("convergence study rows") {
  const RunConfig base = small_base();
  // tau = 0.04, 0.02, 0.01 on the three grids.
  const ConvergenceReport rep = cauchy_convergence_test(base, {4, 8, 16}, 0.05, 0.08);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].m_coarse == 4);
  CHECK(rep.rows[0].m_fine == 8);
  CHECK(rep.rows[1].m_coarse == 8);
  CHECK(std::isnan(rep.rows[0].rate));
  CHECK(rep.rows[1].rate == doctest::Approx(std::log2(rep.rows[0].l2 / rep.rows[1].l2)));
  for (const auto& r : rep.rows) {
    CHECK(r.l2 >= 0);
    CHECK(r.linf >= r.l2 / std::pow(3.2, 1.5) - 1e-15);
  }
  CHECK(rep.grids == std::vector<int>{4, 8, 16});
}

TEST_CASE("convergence study rejects bad grids and times") {
  const RunConfig base = small_base();
  CHECK_THROWS_AS(cauchy_convergence_test(base, {4, 12}, 0.05, 0.02), ConfigError);
  CHECK_THROWS_AS(cauchy_convergence_test(base, {4}, 0.05, 0.02), ConfigError);
  // tau = 0.05 * 0.8 = 0.04 does not divide 0.05.
  CHECK_THROWS_AS(cauchy_convergence_test(base, {4, 8}, 0.05, 0.05), ConfigError);
}

TEST_CASE("complexity study") {
  RunConfig base = small_base();
  base.n_steps = 3;
  const ComplexityReport rep = complexity_test(base, {4, 8}, {{2, 2}, {1, 1}});
  REQUIRE(rep.cases.size() == 4);
  for (const auto& c : rep.cases) {
    CHECK(c.converged);
    CHECK(c.iterations >= 1);
    // Step 1 is the bootstrap.
    CHECK(c.histories.size() == 3);
    CHECK(static_cast<int>(c.histories.back().size()) == c.iterations + 1);
  }
  CHECK(rep.iterations(2, 2).size() == 2);
  CHECK(rep.iterations(3, 3).empty());

  const auto dir = testing::temp_dir("harness");
  write_complexity_csv(dir / "complexity.csv", rep);
  write_residuals_csv(dir / "residuals.csv", rep);
  const auto lines = read_lines(dir / "complexity.csv");
  CHECK(lines.front() == "m,nu1,nu2,step,iterations,converged");
  CHECK(lines.size() == 1 + 4);
  const auto res = read_lines(dir / "residuals.csv");
  CHECK(res.front() == "m,nu1,nu2,step,cycle,residual");
  std::size_t expected = 1;
  for (const auto& c : rep.cases)
    for (const auto& h : c.histories) expected += h.size();
  CHECK(res.size() == expected);
  std::filesystem::remove_all(dir);
}

TEST_CASE("convergence csv") {
  ConvergenceReport rep;
  rep.rows = {{16, 32, 1e-3, 2e-3, std::nan("")}, {32, 64, 2.5e-4, 5e-4, 2.0}};
  const auto dir = testing::temp_dir("conv");
  write_convergence_csv(dir / "convergence.csv", rep);
  const auto lines = read_lines(dir / "convergence.csv");
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "m_coarse,m_fine,cauchy_l2,cauchy_linf,rate");
  CHECK(lines[1].rfind("16,32,", 0) == 0);
  CHECK(lines[2].rfind("32,64,", 0) == 0);
  std::filesystem::remove_all(dir);
}
