#include "pfc3d/multigrid.hpp"

#include <cmath>
#include <sstream>

#include "pfc3d/error.hpp"
#include "pfc3d/parallel.hpp"

namespace pfc3d {

void MGConfig::validate(int fine_m) const {
  if (nu1 < 0 || nu2 < 0) throw ContractError("MGConfig: smoothing counts must be >= 0");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ContractError("MGConfig: tol must be > 0");
  if (max_cycles < 1) throw ContractError("MGConfig: max_cycles must be >= 1");
  if (coarsest_m < 2) throw ContractError("MGConfig: coarsest_m must be >= 2");
  if (coarse_sweeps < 1) throw ContractError("MGConfig: coarse_sweeps must be >= 1");
  int m = fine_m;
  while (m > coarsest_m && m % 2 == 0) m /= 2;
  if (m != coarsest_m) {
    std::ostringstream os;
    os << "MGConfig: m=" << fine_m << " does not halve down to coarsest_m=" << coarsest_m;
    throw ContractError(os.str());
  }
}

// ---------------------------------------------------------------------------
// Smoother

namespace {

double det3(const double a[3][3]) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// Cramer's rule; returns the determinant of a.
double solve3_cramer(const double a[3][3], const double b[3], double x[3]) {
  const double det = det3(a);
  if (!(std::fabs(det) >= 1e-300)) return det;
  for (int col = 0; col < 3; ++col) {
    double t[3][3];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t[r][c] = c == col ? b[r] : a[r][c];
    x[col] = det3(t) / det;
  }
  return det;
}

struct SmootherKernel {
  const GridSpec& g;
  const NeighborTable nb;
  const double inv_h2;
  const double tau_h2;
  const PointwiseCoefficients pc;
  double* phi;
  double* mu;
  double* om;
  const double* phik;
  const double* mx;
  const double* my;
  const double* mz;
  const double* s1;
  const double* s2;
  const double* s3;

  // Local solve at 0-based (i, j, k); false if the determinant vanished.
  bool update(int i, int j, int k) const {
    const std::size_t c = g.offset0(i, j, k);
    const std::size_t xp = g.offset0(nb.plus[i], j, k), xm = g.offset0(nb.minus[i], j, k);
    const std::size_t yp = g.offset0(i, nb.plus[j], k), ym = g.offset0(i, nb.minus[j], k);
    const std::size_t zp = g.offset0(i, j, nb.plus[k]), zm = g.offset0(i, j, nb.minus[k]);

    const double m_e = mx[c], m_w = mx[xm], m_n = my[c], m_s = my[ym], m_u = mz[c], m_d = mz[zm];
    const double m_sum = m_e + m_w + m_n + m_s + m_u + m_d;

    const double phi_n = phi[c];
    const double slope = pc.picard_slope(phi_n, phik[c]);
    const double offset = pc.picard_offset(phi_n, phik[c]);

    const double rhs[3] = {
        s1[c] + tau_h2 * (m_e * mu[xp] + m_w * mu[xm] + m_n * mu[yp] + m_s * mu[ym] +
                          m_u * mu[zp] + m_d * mu[zm]),
        s2[c] + offset + inv_h2 * (om[xp] + om[xm] + om[yp] + om[ym] + om[zp] + om[zm]),
        s3[c] + pc.omega_scale * inv_h2 *
                    (phi[xp] + phi[xm] + phi[yp] + phi[ym] + phi[zp] + phi[zm]),
    };
    const double a[3][3] = {
        {1.0, tau_h2 * m_sum, 0.0},
        {-(slope + pc.linear), 1.0, 6.0 * inv_h2},
        {6.0 * pc.omega_scale * inv_h2, 0.0, 1.0},
    };
    double x[3];
    const double det = solve3_cramer(a, rhs, x);
    if (!(std::fabs(det) >= 1e-300)) return false;
    phi[c] = x[0];
    mu[c] = x[1];
    om[c] = x[2];
    return true;
  }
};

[[noreturn]] void throw_singular(int i, int j, int k) {
  std::ostringstream os;
  os << "singular local 3x3 system at cell (" << i + 1 << ", " << j + 1 << ", " << k + 1 << ")";
  throw SingularSystemError(os.str(), i + 1, j + 1, k + 1);
}

}  // namespace

void smooth(StageVector& u, const SchemeState& state, const MobilityFaces& faces,
            const StageVector& source, int sweeps, SmootherOrder order) {
  require_same_grid(u.spec(), state.spec(), "smooth");
  require_same_grid(source.spec(), state.spec(), "smooth");
  if (sweeps <= 0) return;
  const GridSpec& g = state.spec();
  const int m = g.m();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const SmootherKernel kern{g,
                            NeighborTable(m),
                            inv_h2,
                            state.tau() * inv_h2,
                            pointwise_coefficients(state),
                            u.phi.data(),
                            u.mu.data(),
                            u.omega.data(),
                            state.phi_k().data(),
                            faces.x.data(),
                            faces.y.data(),
                            faces.z.data(),
                            source.phi.data(),
                            source.mu.data(),
                            source.omega.data()};

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    if (order == SmootherOrder::lexicographic) {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            if (!kern.update(i, j, k)) throw_singular(i, j, k);
      continue;
    }
    // Red-black: with even m every neighbor of a cell has the other color,
    // so a color can be updated in parallel.
    for (int color = 0; color < 2; ++color) {
      std::vector<int> bad;
      auto body = [&](int i0, int i1, std::vector<int>& failures) {
        for (int i = i0; i < i1; ++i)
          for (int j = 0; j < m; ++j)
            for (int k = (i + j + color) % 2; k < m; k += 2)
              if (!kern.update(i, j, k) && failures.empty()) failures = {i, j, k};
      };
      if (m % 2 == 0 && num_threads() > 1) {
        std::vector<std::vector<int>> per(m);
        parallel_for(m, [&](int i0, int i1) { body(i0, i1, per[i0]); });
        for (auto& f : per)
          if (!f.empty()) {
            bad = f;
            break;
          }
      } else {
        body(0, m, bad);
      }
      if (!bad.empty()) throw_singular(bad[0], bad[1], bad[2]);
    }
  }
}

// ---------------------------------------------------------------------------
// Transfers

CellField restrict_cells(const CellField& fine) {
  const GridSpec& gf = fine.spec();
  if (gf.m() % 2 != 0) throw ContractError("restrict_cells: m must be even");
  const GridSpec gc(gf.m() / 2, gf.L());
  CellField out(gc);
  const int mc = gc.m();
  for (int I = 0; I < mc; ++I)
    for (int J = 0; J < mc; ++J)
      for (int K = 0; K < mc; ++K) {
        // Pairwise sums keep restrict(prolong(c)) == c bit for bit.
        const int i = 2 * I, j = 2 * J, k = 2 * K;
        auto pair = [&](int a, int b) { return fine.at0(a, b, k) + fine.at0(a, b, k + 1); };
        const double lo = pair(i, j) + pair(i, j + 1);
        const double hi = pair(i + 1, j) + pair(i + 1, j + 1);
        out.at0(I, J, K) = 0.125 * (lo + hi);
      }
  return out;
}

CellField prolong_cells(const CellField& coarse, Prolongation kind) {
  const GridSpec& gc = coarse.spec();
  const GridSpec gf(gc.m() * 2, gc.L());
  CellField out(gf);
  const int mc = gc.m();
  const int mf = gf.m();
  if (kind == Prolongation::constant) {
    for (int i = 0; i < mf; ++i)
      for (int j = 0; j < mf; ++j)
        for (int k = 0; k < mf; ++k) out.at0(i, j, k) = coarse.at0(i / 2, j / 2, k / 2);
    return out;
  }
  // Fine child 2I+d sits a quarter coarse cell from center I, towards I-1
  // for d=0 and towards I+1 for d=1: weights 3/4 and 1/4 per axis.
  auto near_far = [mc](int f, int& near, int& far) {
    near = f / 2;
    far = (f % 2 == 0) ? (near + mc - 1) % mc : (near + 1) % mc;
  };
  for (int i = 0; i < mf; ++i) {
    int in, ifar;
    near_far(i, in, ifar);
    for (int j = 0; j < mf; ++j) {
      int jn, jfar;
      near_far(j, jn, jfar);
      for (int k = 0; k < mf; ++k) {
        int kn, kfar;
        near_far(k, kn, kfar);
        double acc = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
              const double w = (a ? 0.25 : 0.75) * (b ? 0.25 : 0.75) * (c ? 0.25 : 0.75);
              acc += w * coarse.at0(a ? ifar : in, b ? jfar : jn, c ? kfar : kn);
            }
        out.at0(i, j, k) = acc;
      }
    }
  }
  return out;
}

StageVector restrict_stage(const StageVector& fine) {
  return StageVector(restrict_cells(fine.phi), restrict_cells(fine.mu),
                     restrict_cells(fine.omega));
}

StageVector prolong_stage(const StageVector& coarse, Prolongation kind) {
  return StageVector(prolong_cells(coarse.phi, kind), prolong_cells(coarse.mu, kind),
                     prolong_cells(coarse.omega, kind));
}

// ---------------------------------------------------------------------------
// Cycles

MGHierarchy::MGHierarchy(const SchemeState& fine, const MGConfig& config) {
  config.validate(fine.spec().m());
  levels_.push_back({fine, mobility_faces(fine)});
  while (levels_.back().state.spec().m() > config.coarsest_m) {
    const SchemeState& prev = levels_.back().state;
    SchemeState coarse(restrict_cells(prev.phi_k()), restrict_cells(prev.phi_km1()), prev.tau(),
                       prev.params(), prev.mobility(), prev.kind());
    MobilityFaces faces = mobility_faces(coarse);
    levels_.push_back({std::move(coarse), std::move(faces)});
  }
}

void coarse_solve(const MGHierarchy& hierarchy, int level, StageVector& u,
                  const StageVector& source, const MGConfig& config) {
  const auto& lv = hierarchy.level(level);
  const double target = 0.1 * config.tol;
  for (int sweep = 0; sweep < config.coarse_sweeps; ++sweep) {
    if (residual(u, source, lv.state, lv.faces, config.norm).norm <= target) return;
    smooth(u, lv.state, lv.faces, source, 1, config.order);
  }
}

void vcycle(const MGHierarchy& hierarchy, int level, StageVector& u, const StageVector& source,
            const MGConfig& config) {
  if (level == hierarchy.depth() - 1) {
    coarse_solve(hierarchy, level, u, source, config);
    return;
  }
  const auto& lv = hierarchy.level(level);
  const auto& next = hierarchy.level(level + 1);

  smooth(u, lv.state, lv.faces, source, config.nu1, config.order);

  const Residual res = residual(u, source, lv.state, lv.faces, config.norm);
  const StageVector u_coarse = restrict_stage(u);
  StageVector coarse_source = apply_operator(u_coarse, next.state, next.faces);
  coarse_source += restrict_stage(res.r);

  StageVector v = u_coarse;
  vcycle(hierarchy, level + 1, v, coarse_source, config);
  v -= u_coarse;
  u += prolong_stage(v, config.prolongation);

  smooth(u, lv.state, lv.faces, source, config.nu2, config.order);
}

std::pair<StageVector, SolveReport> solve_timestep(const SchemeState& state,
                                                    const MGConfig& config,
                                                    std::optional<StageVector> u0) {
  const MGHierarchy hierarchy(state, config);
  StageVector u = u0 ? std::move(*u0) : default_initial_guess(state);
  require_same_grid(u.spec(), state.spec(), "solve_timestep");
  const StageVector source = assemble_source(state);
  const auto& fine = hierarchy.level(0);

  SolveReport report;
  double r = residual(u, source, fine.state, fine.faces, config.norm).norm;
  report.residual_history.emplace_back(0, r);
  // At least one cycle is always taken.
  do {
    vcycle(hierarchy, 0, u, source, config);
    ++report.cycles;
    r = residual(u, source, fine.state, fine.faces, config.norm).norm;
    report.residual_history.emplace_back(report.cycles, r);
    if (!std::isfinite(r)) break;
  } while (r > config.tol && report.cycles < config.max_cycles);
  report.final_residual = r;
  report.converged = r <= config.tol;
  report.mass_drift = std::fabs(mean(u.phi) - mean(state.phi_k()));

  if (report.converged && config.norm == ResidualNorm::l2) {
    const double bound = 10.0 * config.tol / std::pow(state.spec().L(), 1.5);
    if (report.mass_drift > bound) {
      std::ostringstream os;
      os << "mass drift " << report.mass_drift << " exceeds " << bound << " after a converged solve";
      throw SolverError(os.str());
    }
  }
  return {std::move(u), std::move(report)};
}

}  // namespace pfc3d
