#include "pfc3d/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "pfc3d/energy.hpp"
#include "pfc3d/grid.hpp"
#include "pfc3d/spectral.hpp"

namespace pfc3d {

int SuiteResult::checks() const {
  int n = 0;
  for (const auto& p : properties) n += p.checks;
  return n;
}

int SuiteResult::failures() const {
  int n = 0;
  for (const auto& p : properties) n += p.failures;
  return n;
}

bool SuiteResult::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed(); });
}

const PropertyResult* SuiteResult::find(const std::string& property) const {
  for (const auto& p : properties)
    if (p.name == property) return &p;
  return nullptr;
}

namespace {

constexpr double kDomainLengths[] = {1.0, 3.2, 2.0 * std::numbers::pi};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * unit() - 1.0; }
  CellField field(const GridSpec& g, double amplitude = 1.0) {
    CellField f(g);
    for (double& v : f.values()) v = amplitude * symmetric();
    return f;
  }

 private:
  std::mt19937_64 gen_;
};

double rel_err(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

// Records |a-b|/max(|a|,|b|) <= tol.
void check_equal(PropertyResult& p, double a, double b, double tol) {
  const double e = rel_err(a, b);
  ++p.checks;
  if (!(e <= tol)) ++p.failures;
  p.worst = std::max(p.worst, e);
}

// Records lhs <= rhs and tracks the largest lhs/rhs.
void check_le(PropertyResult& p, double lhs, double rhs, double rel_tol = 0.0) {
  ++p.checks;
  if (!(lhs <= rhs + rel_tol * std::fabs(rhs))) ++p.failures;
  if (rhs > 0.0) p.worst = std::max(p.worst, lhs / rhs);
}

CellField shifted(const CellField& f, int a, int b, int c) {
  CellField g(f.spec());
  const int m = f.spec().m();
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      for (int k = 1; k <= m; ++k) g(i, j, k) = f(i + a, j + b, k + c);
  return g;
}

// g(x) = f(T x) for T a signed axis permutation acting on 1-based indices.
CellField transformed(const CellField& f, const std::array<int, 3>& perm, const std::array<bool, 3>& flip) {
  CellField g(f.spec());
  const int m = f.spec().m();
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      for (int k = 1; k <= m; ++k) {
        const int x[3] = {i, j, k};
        int y[3];
        for (int a = 0; a < 3; ++a) y[a] = flip[a] ? m + 1 - x[perm[a]] : x[perm[a]];
        g(i, j, k) = f(y[0], y[1], y[2]);
      }
  return g;
}

double max_abs_diff(const CellField& a, const CellField& b) { return norm_inf(a - b); }

SuiteOptions with_defaults(SuiteOptions o, int instances, std::vector<int> grids) {
  if (o.instances <= 0) o.instances = instances;
  if (o.grids.empty()) o.grids = std::move(grids);
  return o;
}

}  // namespace

SuiteResult verify_operator_calculus(SuiteOptions options) {
  options = with_defaults(std::move(options), 100, {3, 4, 8});
  Sampler rng(options.seed);
  PropertyResult sbp1{"sbp_laplacian", 0, 0, 0.0, "(f, lap g) = -(grad f, grad g), rel 1e-11"};
  PropertyResult sbp2{"sbp_biharmonic", 0, 0, 0.0, "(f, lap^2 g) = (lap f, lap g), rel 1e-11"};
  PropertyResult sbp3{"sbp_triharmonic", 0, 0, 0.0,
                      "(f, lap^3 g) = -(grad lap f, grad lap g), rel 1e-11"};
  PropertyResult interp{"interpolation_inequality", 0, 0, 0.0,
                        "||lap f||^2 <= ||f||^2/(3a^2) + (2a/3)||grad lap f||^2, a in {0.1,1,10}"};
  PropertyResult coerc{"energy_coercivity", 0, 0, 0.0,
                       "F_h + L^3/4 >= 0; worst = min (F_h + L^3/4)/||phi||_{2,2}^2"};
  PropertyResult period{"periodic_shift", 0, 0, 0.0, "lap(shift f) = shift(lap f)"};
  PropertyResult constant{"laplacian_constants", 0, 0, 0.0, "lap c = 0 and mean(lap f) = 0"};
  double min_ratio = std::numeric_limits<double>::infinity();

  const double alphas[] = {0.1, 1.0, 10.0};
  int n = 0;
  for (int m : options.grids) {
    for (int inst = 0; inst < options.instances; ++inst, ++n) {
      const GridSpec g(m, kDomainLengths[n % 3]);
      const CellField f = rng.field(g);
      const CellField u = rng.field(g);
      const CellField lf = laplacian(f);
      const CellField lu = laplacian(u);
      const CellField llu = laplacian(lu);
      check_equal(sbp1, inner_product(f, lu), -grad_inner_product(f, u), 1e-11);
      check_equal(sbp2, inner_product(f, llu), inner_product(lf, lu), 1e-11);
      check_equal(sbp3, inner_product(f, laplacian(llu)), -grad_inner_product(lf, lu), 1e-11);

      const double lap_sq = inner_product(lf, lf);
      const double f_sq = inner_product(f, f);
      const double glap_sq = grad_norm_sq(lf);
      for (double a : alphas) {
        check_le(interp, lap_sq, f_sq / (3.0 * a * a) + (2.0 * a / 3.0) * glap_sq, 1e-13);
      }

      for (double eps : {0.025, 0.25}) {
        const double amplitude = std::pow(10.0, static_cast<double>(inst % 4) - 2.0);
        const CoercivityPair cp = coercivity_bound(rng.field(g, amplitude), {eps});
        ++coerc.checks;
        if (!(cp.lhs >= 0.0)) ++coerc.failures;
        if (cp.rhs > 0.0) min_ratio = std::min(min_ratio, cp.lhs / cp.rhs);
      }

      const int a = 1 + inst % m, b = 2 * inst % m, c = m - 1;
      check_le(period, max_abs_diff(laplacian(shifted(f, a, b, c)), shifted(lf, a, b, c)),
               1e-14 * norm_inf(lf));

      CellField cst(g);
      cst.fill(rng.symmetric());
      check_le(constant, norm_inf(laplacian(cst)), 1e-12 * std::fabs(cst.at0(0, 0, 0)) / (g.h() * g.h()));
      check_le(constant, std::fabs(mean(lf)), 1e-13 * norm_inf(lf));
    }
  }
  coerc.worst = min_ratio;
  return {"operator_calculus", {sbp1, sbp2, sbp3, interp, coerc, period, constant}};
}

SuiteResult verify_energy(SuiteOptions options) {
  options = with_defaults(std::move(options), 20, {4, 5});
  Sampler rng(options.seed ^ 0x9e3779b97f4a7c15ull);
  PropertyResult even{"energy_even", 0, 0, 0.0, "F_h(-phi) = F_h(phi)"};
  PropertyResult symm{"energy_lattice_symmetry", 0, 0, 0.0, "48 signed axis permutations"};
  PropertyResult shift{"energy_shift_invariance", 0, 0, 0.0, "periodic index shifts"};
  PropertyResult modified{"modified_energy_upper", 0, 0, 0.0, "modified_energy(phi, psi) >= F_h(phi)"};

  std::array<int, 3> perm = {0, 1, 2};
  std::vector<std::array<int, 3>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  int n = 0;
  for (int m : options.grids) {
    for (int inst = 0; inst < options.instances; ++inst, ++n) {
      const GridSpec g(m, kDomainLengths[n % 3]);
      const EnergyParams p{inst % 2 ? 0.25 : 0.025};
      const CellField phi = rng.field(g, 0.5);
      const double e = discrete_energy(phi, p);
      check_equal(even, discrete_energy(-1.0 * phi, p), e, 1e-13);
      check_equal(shift, discrete_energy(shifted(phi, inst % m, 1, m - 1 - inst % m), p), e, 1e-12);
      for (const auto& pm : perms)
        for (int s = 0; s < 8; ++s) {
          const std::array<bool, 3> flip = {(s & 1) != 0, (s & 2) != 0, (s & 4) != 0};
          check_equal(symm, discrete_energy(transformed(phi, pm, flip), p), e, 1e-12);
        }
      const CellField psi = rng.field(g, 0.5);
      ++modified.checks;
      if (!(modified_energy(phi, psi, p) >= e)) ++modified.failures;
    }
  }
  return {"energy", {even, symm, shift, modified}};
}

SuiteResult verify_spectral(SuiteOptions options) {
  options = with_defaults(std::move(options), 200, {5, 9, 17});
  Sampler rng(options.seed ^ 0xd1b54a32d192ed03ull);
  PropertyResult l2{"parseval_l2", 0, 0, 0.0, "||f||^2 = L^3 sum |c|^2, rel 1e-11"};
  PropertyResult d1{"parseval_difference", 0, 0, 0.0, "[D f, D f] = L^3 sum |u|^2 |c|^2 per axis, rel 1e-11"};
  PropertyResult d2{"parseval_second_difference", 0, 0, 0.0,
                    "||d(D f)||^2 = L^3 sum |u|^4 |c|^2 per axis, rel 1e-11"};
  PropertyResult sym{"symbol_bounds", 0, 0, 0.0, "(2/pi)|v_r| <= |u_r| <= |v_r|; worst = max |u|/|v|"};
  PropertyResult h2{"h2_comparison", 0, 0, 0.0, "||f_F||_H2^2 <= 2 (pi/2)^4 ||f||_{2,2}^2; worst = max ratio"};
  PropertyResult interp{"interpolant_at_centers", 0, 0, 0.0, "f_F(x_i) = f_i, rel 1e-12 of ||f||_inf"};
  PropertyResult chain{"max_norm_refined", 0, 0, 0.0,
                       "||f||_inf <= max |f_F| on a 4x refined grid (first 10 instances per m)"};

  int n = 0;
  for (int m : options.grids) {
    const int R = (m - 1) / 2;
    for (double L : kDomainLengths) {
      for (const auto& s : symbol_bounds(R, L, L / m)) {
        ++sym.checks;
        const double lo = 2.0 / std::numbers::pi * s.continuous;
        if (!(lo <= s.discrete * (1.0 + 1e-14) && s.discrete <= s.continuous * (1.0 + 1e-14))) {
          ++sym.failures;
        }
        if (s.continuous > 0.0) sym.worst = std::max(sym.worst, s.discrete / s.continuous);
      }
    }

    for (int inst = 0; inst < options.instances; ++inst, ++n) {
      const GridSpec g(m, kDomainLengths[n % 3]);
      const CellField f = rng.field(g);
      const SpectralField s = dft3(f);

      check_equal(l2, inner_product(f, f), parseval_l2_sq(s), 1e-11);
      for (Axis a : kAxes) {
        const FaceField df = face_difference(f, a);
        check_equal(d1, face_inner_product(df, df), parseval_difference_sq(s, a), 1e-11);
        const CellField ddf = cell_difference(df, a);
        check_equal(d2, inner_product(ddf, ddf), parseval_second_difference_sq(s, a), 1e-11);
      }

      const H2Comparison cmp = h2_embedding_check(f);
      check_le(h2, cmp.h2_interpolant_sq, cmp.bound_sq);

      std::vector<double> xs(m);
      for (int i = 0; i < m; ++i) xs[i] = g.center(i + 1);
      const std::vector<double> vals = evaluate_interpolant(s, xs);
      const double finf = norm_inf(f);
      double err = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            err = std::max(err, std::fabs(vals[(static_cast<std::size_t>(i) * m + j) * m + k] - f.at0(i, j, k)));
      ++interp.checks;
      const double rel = finf > 0.0 ? err / finf : err;
      if (!(rel <= 1e-12)) ++interp.failures;
      interp.worst = std::max(interp.worst, rel);

      if (inst < 10) {
        std::vector<double> fine(4 * m);
        for (int i = 0; i < 4 * m; ++i) fine[i] = g.center(i / 4 + 1) + (i % 4) * g.h() / 4.0;
        double fmax = 0.0;
        for (double v : evaluate_interpolant(s, fine)) fmax = std::max(fmax, std::fabs(v));
        check_le(chain, finf, fmax, 1e-12);
      }
    }
  }
  return {"spectral", {l2, d1, d2, sym, h2, interp, chain}};
}

std::string format_suite(const SuiteResult& suite) {
  std::ostringstream os;
  char buf[256];
  for (const auto& p : suite.properties) {
    std::snprintf(buf, sizeof buf, "  %-4s %-28s checks=%-6d failures=%-4d worst=%.3e  (%s)\n",
                  p.passed() ? "ok" : "FAIL", p.name.c_str(), p.checks, p.failures, p.worst,
                  p.note.c_str());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%s: %d properties, %d checks, %d failures -> %s\n", suite.name.c_str(),
                static_cast<int>(suite.properties.size()), suite.checks(), suite.failures(),
                suite.passed() ? "PASS" : "FAIL");
  os << buf;
  return os.str();
}

}  // namespace pfc3d
