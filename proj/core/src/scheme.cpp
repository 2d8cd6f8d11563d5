#include "pfc3d/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pfc3d/error.hpp"
#include "pfc3d/parallel.hpp"
#include "pfc3d/summation.hpp"

namespace pfc3d {

MobilityModel::MobilityModel() : name_("constant-one"), constant_(true) {}

MobilityModel::MobilityModel(std::function<double(double)> fn, std::string name)
    : fn_(std::move(fn)), name_(std::move(name)), constant_(false) {
  if (!fn_) throw ContractError("MobilityModel: empty evaluator");
}

SchemeState::SchemeState(CellField phi_k, CellField phi_km1, double tau, EnergyParams params,
                         MobilityModel mobility, SchemeKind kind)
    : phi_k_(std::move(phi_k)),
      phi_km1_(std::move(phi_km1)),
      tau_(tau),
      params_(params),
      mobility_(std::move(mobility)),
      kind_(kind) {
  require_same_grid(phi_k_.spec(), phi_km1_.spec(), "SchemeState");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ContractError("SchemeState: tau must be positive and finite");
  params_.validate();
}

CellField SchemeState::extrapolated_density() const {
  if (kind_ == SchemeKind::first_order) return phi_k_;
  return 1.5 * phi_k_ - 0.5 * phi_km1_;
}

StageVector::StageVector(CellField p, CellField m, CellField w)
    : phi(std::move(p)), mu(std::move(m)), omega(std::move(w)) {
  require_same_grid(phi.spec(), mu.spec(), "StageVector");
  require_same_grid(phi.spec(), omega.spec(), "StageVector");
}

CellField& StageVector::operator[](int row) {
  switch (row) {
    case 0: return phi;
    case 1: return mu;
    case 2: return omega;
  }
  throw ContractError("StageVector: row index out of range");
}

const CellField& StageVector::operator[](int row) const {
  return const_cast<StageVector&>(*this)[row];
}

StageVector& StageVector::operator+=(const StageVector& o) {
  phi += o.phi;
  mu += o.mu;
  omega += o.omega;
  return *this;
}

StageVector& StageVector::operator-=(const StageVector& o) {
  phi -= o.phi;
  mu -= o.mu;
  omega -= o.omega;
  return *this;
}

const FaceField& MobilityFaces::operator[](Axis a) const {
  switch (a) {
    case Axis::x: return x;
    case Axis::y: return y;
    case Axis::z: return z;
  }
  return x;
}

MobilityFaces mobility_faces(const SchemeState& state) {
  const GridSpec& g = state.spec();
  const MobilityModel& model = state.mobility();
  if (model.is_constant()) {
    return {FaceField(g, Axis::x, 1.0), FaceField(g, Axis::y, 1.0), FaceField(g, Axis::z, 1.0)};
  }
  const CellField star = state.extrapolated_density();
  auto eval = [&](Axis a) {
    FaceField f = face_average(star, a);
    const int m = g.m();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          double& v = f.data()[g.offset0(i, j, k)];
          v = model(v);
          if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << "mobility " << model.name() << " is not positive (" << v << ") at "
               << axis_name(a) << "-face (" << i + 1 << (a == Axis::x ? "+1/2" : "") << ", "
               << j + 1 << (a == Axis::y ? "+1/2" : "") << ", " << k + 1
               << (a == Axis::z ? "+1/2" : "") << ")";
            throw ContractError(os.str());
          }
        }
    return f;
  };
  return {eval(Axis::x), eval(Axis::y), eval(Axis::z)};
}

PointwiseCoefficients pointwise_coefficients(const SchemeState& state) {
  const double eps = state.params().epsilon;
  if (state.kind() == SchemeKind::first_order) return {1.0 - eps, 1.0, SchemeKind::first_order};
  return {0.5 * (1.0 - eps), 0.5, SchemeKind::crank_nicolson};
}

StageVector assemble_source(const SchemeState& state) {
  const GridSpec& g = state.spec();
  const double eps = state.params().epsilon;
  const CellField lap_k = laplacian(state.phi_k());
  StageVector s(g);
  s.phi = state.phi_k();
  if (state.kind() == SchemeKind::first_order) {
    s.mu = 2.0 * lap_k;
    s.omega.fill(0.0);
    return s;
  }
  const CellField lap_km1 = laplacian(state.phi_km1());
  const double c = 0.5 * (1.0 - eps);
  for (std::size_t n = 0; n < g.cells(); ++n) {
    s.mu.data()[n] = c * state.phi_k().data()[n] + 3.0 * lap_k.data()[n] - lap_km1.data()[n];
    s.omega.data()[n] = 0.5 * lap_k.data()[n];
  }
  return s;
}

StageVector apply_operator(const StageVector& u, const SchemeState& state,
                           const MobilityFaces& faces) {
  require_same_grid(u.spec(), state.spec(), "apply_operator");
  const GridSpec& g = state.spec();
  const int m = g.m();
  const NeighborTable nb(m);
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const double tau_h2 = state.tau() * inv_h2;
  const PointwiseCoefficients pc = pointwise_coefficients(state);

  const double* phi = u.phi.data();
  const double* mu = u.mu.data();
  const double* om = u.omega.data();
  const double* phik = state.phi_k().data();
  const double* mx = faces.x.data();
  const double* my = faces.y.data();
  const double* mz = faces.z.data();

  StageVector out(g);
  double* n1 = out.phi.data();
  double* n2 = out.mu.data();
  double* n3 = out.omega.data();

  parallel_for(m, [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const std::size_t c = g.offset0(i, j, k);
          const std::size_t xp = g.offset0(nb.plus[i], j, k), xm = g.offset0(nb.minus[i], j, k);
          const std::size_t yp = g.offset0(i, nb.plus[j], k), ym = g.offset0(i, nb.minus[j], k);
          const std::size_t zp = g.offset0(i, j, nb.plus[k]), zm = g.offset0(i, j, nb.minus[k]);

          // Faces i+1/2 live in slot c, faces i-1/2 in the slot of the minus neighbor.
          const double flux = mx[c] * (mu[xp] - mu[c]) - mx[xm] * (mu[c] - mu[xm]) +
                              my[c] * (mu[yp] - mu[c]) - my[ym] * (mu[c] - mu[ym]) +
                              mz[c] * (mu[zp] - mu[c]) - mz[zm] * (mu[c] - mu[zm]);
          n1[c] = phi[c] - tau_h2 * flux;

          const double lap_om =
              (om[xp] + om[xm] + om[yp] + om[ym] + om[zp] + om[zm] - 6.0 * om[c]) * inv_h2;
          n2[c] = mu[c] - pc.nonlinear(phi[c], phik[c]) - pc.linear * phi[c] - lap_om;

          const double lap_phi =
              (phi[xp] + phi[xm] + phi[yp] + phi[ym] + phi[zp] + phi[zm] - 6.0 * phi[c]) * inv_h2;
          n3[c] = om[c] - pc.omega_scale * lap_phi;
        }
  });
  return out;
}

StageVector apply_operator(const StageVector& u, const SchemeState& state) {
  return apply_operator(u, state, mobility_faces(state));
}

double composite_norm(const StageVector& r, ResidualNorm kind) {
  if (kind == ResidualNorm::linf) {
    return std::max({norm_inf(r.phi), norm_inf(r.mu), norm_inf(r.omega)});
  }
  return std::sqrt(inner_product(r.phi, r.phi) + inner_product(r.mu, r.mu) +
                   inner_product(r.omega, r.omega));
}

Residual residual(const StageVector& u, const StageVector& source, const SchemeState& state,
                  const MobilityFaces& faces, ResidualNorm kind) {
  require_same_grid(source.spec(), state.spec(), "residual");
  StageVector r = source;
  r -= apply_operator(u, state, faces);
  const double nrm = composite_norm(r, kind);
  return {std::move(r), nrm};
}

Residual residual(const StageVector& u, const SchemeState& state, ResidualNorm kind) {
  return residual(u, assemble_source(state), state, mobility_faces(state), kind);
}

CellField mu_of(const CellField& phi_new, const SchemeState& state) {
  require_same_grid(phi_new.spec(), state.spec(), "mu_of");
  const GridSpec& g = state.spec();
  const double eps = state.params().epsilon;
  const PointwiseCoefficients pc = pointwise_coefficients(state);
  const CellField& phik = state.phi_k();
  const CellField lap_k = laplacian(phik);

  CellField out(g);
  if (state.kind() == SchemeKind::first_order) {
    const CellField bilap = laplacian(laplacian(phi_new));
    for (std::size_t n = 0; n < g.cells(); ++n) {
      const double p = phi_new.data()[n];
      out.data()[n] = p * p * p + (1.0 - eps) * p + 2.0 * lap_k.data()[n] + bilap.data()[n];
    }
    return out;
  }
  const CellField lap_km1 = laplacian(state.phi_km1());
  const CellField bilap = laplacian(laplacian(phi_new + phik));
  for (std::size_t n = 0; n < g.cells(); ++n) {
    const double p = phi_new.data()[n];
    const double q = phik.data()[n];
    out.data()[n] = pc.nonlinear(p, q) + pc.linear * (p + q) + 3.0 * lap_k.data()[n] -
                    lap_km1.data()[n] + 0.5 * bilap.data()[n];
  }
  return out;
}

StageVector default_initial_guess(const SchemeState& state) {
  const CellField& phik = state.phi_k();
  return StageVector(phik, mu_of(phik, state), laplacian(phik));
}

}  // namespace pfc3d
