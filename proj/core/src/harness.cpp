#include "pfc3d/harness.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "pfc3d/error.hpp"

namespace pfc3d {

CellField nn_interpolate_coarse_to_fine(const CellField& coarse, int m_fine) {
  if (m_fine != 2 * coarse.spec().m()) {
    throw ContractError("nn_interpolate: fine grid must have exactly twice the coarse cells");
  }
  return prolong_cells(coarse, Prolongation::constant);
}

namespace {

int whole_steps(double t_final, double tau, int m) {
  const double n = t_final / tau;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::fabs(n - rounded) > 1e-9 * rounded) {
    throw ConfigError("t_final is not a whole number of steps on m=" + std::to_string(m));
  }
  return static_cast<int>(rounded);
}

void check_doubling(const std::vector<int>& grids) {
  if (grids.size() < 2) throw ConfigError("convergence test needs at least two grids");
  for (std::size_t i = 1; i < grids.size(); ++i) {
    if (grids[i] != 2 * grids[i - 1]) throw ConfigError("grid list must double at every entry");
  }
}

struct FileCloser {
  void operator()(std::FILE* fp) const { std::fclose(fp); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_csv(const std::filesystem::path& path) {
  File fp(std::fopen(path.c_str(), "w"));
  if (!fp) throw IoError("cannot open " + path.string());
  return fp;
}

}  // namespace

ConvergenceReport cauchy_convergence_test(const RunConfig& base, const std::vector<int>& grids,
                                          double tau_over_h, double t_final) {
  check_doubling(grids);
  if (!(tau_over_h > 0.0)) throw ConfigError("tau_over_h must be > 0");
  ConvergenceReport rep{base, tau_over_h, t_final, grids, {}};

  std::vector<CellField> finals;
  for (int m : grids) {
    RunConfig c = base;
    c.m = m;
    c.tau = tau_over_h * base.L / m;
    c.n_steps = whole_steps(t_final, c.tau, m);
    c.output_dir.clear();
    c.snapshot_every.reset();
    c.energy_log_every = c.n_steps;
    finals.push_back(*run(c).final_phi);
  }
  for (std::size_t i = 1; i < finals.size(); ++i) {
    const CellField diff = finals[i] - nn_interpolate_coarse_to_fine(finals[i - 1], grids[i]);
    const double l2 = norm_p(diff, 2.0);
    const double rate = rep.rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : std::log2(rep.rows.back().l2 / l2);
    rep.rows.push_back({grids[i - 1], grids[i], l2, norm_inf(diff), rate});
  }
  return rep;
}

std::vector<int> ComplexityReport::iterations(int nu1, int nu2) const {
  std::vector<int> out;
  for (const auto& c : cases)
    if (c.nu1 == nu1 && c.nu2 == nu2) out.push_back(c.iterations);
  return out;
}

ComplexityReport complexity_test(const RunConfig& base, const std::vector<int>& grids,
                                 const std::vector<std::pair<int, int>>& smoothing) {
  ComplexityReport rep{base, {}};
  for (const auto& [nu1, nu2] : smoothing) {
    for (int m : grids) {
      RunConfig c = base;
      c.m = m;
      c.mg.nu1 = nu1;
      c.mg.nu2 = nu2;
      c.output_dir.clear();
      c.snapshot_every.reset();
      c.fail_on_nonconvergence = false;
      ComplexityCase cc{m, nu1, nu2, 0, true, {}};
      bool last_converged = true;
      int last_cycles = 0;
      run(c, [&](int, const CellField&, const SolveReport& s) {
        cc.histories.push_back(s.residual_history);
        last_converged = s.converged;
        last_cycles = s.cycles;
      });
      cc.converged = last_converged;
      cc.iterations = last_converged ? last_cycles : c.mg.max_cycles;
      rep.cases.push_back(std::move(cc));
    }
  }
  return rep;
}

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& report) {
  File fp = open_csv(path);
  std::fprintf(fp.get(), "m_coarse,m_fine,cauchy_l2,cauchy_linf,rate\n");
  for (const auto& r : report.rows) {
    std::fprintf(fp.get(), "%d,%d,%.10e,%.10e,", r.m_coarse, r.m_fine, r.l2, r.linf);
    if (std::isnan(r.rate))
      std::fprintf(fp.get(), "\n");
    else
      std::fprintf(fp.get(), "%.6f\n", r.rate);
  }
}

void write_complexity_csv(const std::filesystem::path& path, const ComplexityReport& report) {
  File fp = open_csv(path);
  std::fprintf(fp.get(), "m,nu1,nu2,step,iterations,converged\n");
  for (const auto& c : report.cases) {
    std::fprintf(fp.get(), "%d,%d,%d,%d,%d,%d\n", c.m, c.nu1, c.nu2, report.base.n_steps,
                 c.iterations, c.converged ? 1 : 0);
  }
}

void write_residuals_csv(const std::filesystem::path& path, const ComplexityReport& report) {
  File fp = open_csv(path);
  std::fprintf(fp.get(), "m,nu1,nu2,step,cycle,residual\n");
  for (const auto& c : report.cases)
    for (std::size_t s = 0; s < c.histories.size(); ++s)
      for (const auto& [cycle, r] : c.histories[s])
        std::fprintf(fp.get(), "%d,%d,%d,%zu,%d,%.10e\n", c.m, c.nu1, c.nu2, s + 1, cycle, r);
}

}  // namespace pfc3d
