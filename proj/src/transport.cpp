#include "lmn/transport.hpp"

#include <cmath>
#include <string>

#include "parallel.hpp"

namespace lmn::transport {

using mesh::DualMesh;

std::vector<Vec3> FlowState::velocities() const {
  std::vector<Vec3> U(W.size());
  for (std::size_t i = 0; i < W.size(); ++i) U[i] = W[i] / rho[i];
  return U;
}

void FlowState::validate(const DualMesh& dual) const {
  if (W.size() != dual.cells() || rho.size() != dual.cells() ||
      pi.size() != dual.mesh.vertices.size()) {
    throw StateError("flow state sizes do not match the mesh");
  }
  for (std::size_t i = 0; i < W.size(); ++i) {
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) {
      throw StateError("nonpositive or non-finite density in cell " + std::to_string(i));
    }
    if (!W[i].allFinite()) throw StateError("non-finite momentum in cell " + std::to_string(i));
  }
  for (double p : pi) {
    if (!std::isfinite(p)) throw StateError("non-finite pressure");
  }
}

void PhysParams::validate() const {
  if (!(mu >= 0.0)) throw StateError("viscosity must be nonnegative");
  if (!background_pressure || !(background_pressure(0.0) > 0.0)) {
    throw StateError("background pressure must be positive");
  }
  if (!(gas_constant > 0.0)) throw StateError("gas constant must be positive");
  if (molar_masses.empty()) throw StateError("at least one species is required");
  for (double m : molar_masses) {
    if (!(m > 0.0)) throw StateError("molar masses must be positive");
  }
}

Vec3 normal_flux(const Vec3& W, double rho, const Vec3& eta) {
  if (!(rho > 0.0)) throw StateError("normal flux with nonpositive density");
  return (W.dot(eta) / rho) * W;
}

adr1d::SignedMax rusanov_alpha(const Vec3& W_i, const Vec3& W_j, double rho_i, double rho_j,
                               const Vec3& eta) {
  if (!(rho_i > 0.0) || !(rho_j > 0.0)) throw StateError("Rusanov coefficient with nonpositive density");
  return adr1d::signed_max(2.0 * W_i.dot(eta) / rho_i, 2.0 * W_j.dot(eta) / rho_j);
}

Vec3 density_upwind_term(const Vec3& W_i, const Vec3& W_j, double rho_i, double rho_j,
                         const Vec3& eta, double breve) {
  const Vec3 S = W_i + W_j;
  const double rs = rho_i + rho_j;
  return (sign_of(breve) * S.dot(eta) * (rho_j - rho_i) / (3.0 * rs * rs)) * S;
}

Vec3 momentum_flux(const Vec3& W_i, const Vec3& W_j, double rho_i, double rho_j, const Vec3& eta,
                   bool density_term) {
  const auto a = rusanov_alpha(W_i, W_j, rho_i, rho_j, eta);
  Vec3 phi = 0.5 * (normal_flux(W_i, rho_i, eta) + normal_flux(W_j, rho_j, eta)) -
             0.5 * a.alpha * (W_j - W_i);
  if (density_term) phi += density_upwind_term(W_i, W_j, rho_i, rho_j, eta, a.breve);
  if (!phi.allFinite()) throw DivergenceError("non-finite momentum flux");
  return phi;
}

DensityVisc density_visc_cellwise(const DualMesh& dual, std::span<const Vec3> W,
                                  std::span<const double> rho, int cell) {
  DensityVisc out;
  for (const auto& l : dual.links_of(cell)) {
    const Vec3 eta = l.orientation * dual.interfaces[l.interface].eta;
    const int j = l.neighbor;
    const Vec3 S = W[cell] + W[j];
    const double rs = rho[cell] + rho[j];
    const Vec3 v = (-S.dot(eta) * (rho[j] - rho[cell]) / (3.0 * rs * rs)) * S;
    const double s = sign_of(rusanov_alpha(W[cell], W[j], rho[cell], rho[j], eta).breve);
    out.V += v;
    out.G -= (1.0 - s) * v;
  }
  out.V /= dual.volume[cell];
  out.G /= dual.volume[cell];
  return out;
}

std::vector<Vec3> advective_residual(const DualMesh& dual, std::span<const Vec3> W,
                                     std::span<const double> rho, Approach approach) {
  const int n = static_cast<int>(dual.cells());
  std::vector<Vec3> r(n, Vec3::Zero());
  if (approach == Approach::flux_term) {
    std::vector<Vec3> phi(dual.interfaces.size());
    for (std::size_t k = 0; k < phi.size(); ++k) {
      const auto& f = dual.interfaces[k];
      phi[k] = momentum_flux(W[f.cell_i], W[f.cell_j], rho[f.cell_i], rho[f.cell_j], f.eta, true);
    }
    for (int i = 0; i < n; ++i) {
      for (const auto& l : dual.links_of(i)) r[i] += l.orientation * phi[l.interface];
      r[i] /= dual.volume[i];
    }
    return r;
  }
  for (int i = 0; i < n; ++i) {
    for (const auto& l : dual.links_of(i)) {
      const Vec3 eta = l.orientation * dual.interfaces[l.interface].eta;
      r[i] += momentum_flux(W[i], W[l.neighbor], rho[i], rho[l.neighbor], eta, false);
    }
    const auto dv = density_visc_cellwise(dual, W, rho, i);
    r[i] = r[i] / dual.volume[i] - dv.V - dv.G;
  }
  return r;
}

Mat3 element_gradient(const DualMesh& dual, std::span<const Vec3> field, int elem) {
  const auto& nodes = dual.aux_nodes[elem];
  const auto& g = dual.aux_grads[elem];
  Mat3 G = Mat3::Zero();
  for (int k = 0; k < 4; ++k) G += field[nodes[k]] * g[k].transpose();
  return G;
}

Mat3 viscous_stress(const Mat3& grad_u, double mu) {
  return mu * (grad_u + grad_u.transpose() - (2.0 / 3.0) * grad_u.trace() * Mat3::Identity());
}

Vec3 viscous_flux(const DualMesh& dual, std::span<const Vec3> U, int interface, double mu) {
  const auto& f = dual.interfaces[interface];
  if (mu == 0.0) return Vec3::Zero();
  return viscous_stress(element_gradient(dual, U, f.elem), mu) * f.eta;
}

namespace {

// Δt-free part of the viscous half step: nodal average of div D over the
// elements sharing each face, D being the nodal average of the stress.
std::vector<Vec3> nodal_stress_divergence(const DualMesh& dual, std::span<const Vec3> U,
                                          double mu) {
  const std::size_t n = dual.cells();
  const std::size_t ne = dual.mesh.tets.size();
  std::vector<Mat3> tau(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    tau[e] = viscous_stress(element_gradient(dual, U, static_cast<int>(e)), mu);
  }
  std::vector<Mat3> D(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& tets = dual.mesh.faces[i].tets;
    D[i] = tets[1] < 0 ? tau[tets[0]] : 0.5 * (tau[tets[0]] + tau[tets[1]]);
  }
  std::vector<Vec3> divD(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& nodes = dual.aux_nodes[e];
    const auto& g = dual.aux_grads[e];
    Vec3 d = Vec3::Zero();
    for (int k = 0; k < 4; ++k) d += D[nodes[k]] * g[k];
    divD[e] = d;
  }
  std::vector<Vec3> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& tets = dual.mesh.faces[i].tets;
    out[i] = tets[1] < 0 ? divD[tets[0]] : 0.5 * (divD[tets[0]] + divD[tets[1]]);
  }
  return out;
}

}  // namespace

std::vector<Vec3> evolve_viscous_states(const DualMesh& dual, std::span<const Vec3> U,
                                        std::span<const double> rho, double dt, double mu) {
  std::vector<Vec3> out(U.begin(), U.end());
  if (mu == 0.0) return out;
  const auto div = nodal_stress_divergence(dual, U, mu);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += (0.5 * dt / rho[i]) * div[i];
  return out;
}

Vec3 pressure_face_integral(const std::array<double, 4>& pi, const Vec3& eta) {
  return ((5.0 / 12.0) * (pi[0] + pi[1]) + (1.0 / 12.0) * (pi[2] + pi[3])) * eta;
}

Vec3 pressure_face_integral(const DualMesh& dual, std::span<const double> pi, int interface) {
  const auto& f = dual.interfaces[interface];
  return pressure_face_integral({pi[f.edge[0]], pi[f.edge[1]], pi[f.opposite_i], pi[f.opposite_j]},
                                f.eta);
}

EnoValues eno_select(double f_i, double f_j, const Vec3& g_left, const Vec3& g_mid,
                     const Vec3& g_right, const Vec3& d_i, const Vec3& d_j) {
  EnoValues out;
  const double li = g_left.dot(d_i);
  const double mi = g_mid.dot(d_i);
  out.grad_i = std::abs(li) <= std::abs(mi) ? g_left : g_mid;
  const double rj = g_right.dot(d_j);
  const double mj = g_mid.dot(d_j);
  out.grad_j = std::abs(rj) <= std::abs(mj) ? g_right : g_mid;
  out.value_i = f_i + out.grad_i.dot(d_i);
  out.value_j = f_j + out.grad_j.dot(d_j);
  return out;
}

EnoValues eno_reconstruct_3d(const DualMesh& dual, std::span<const double> field, int interface) {
  const auto& f = dual.interfaces[interface];
  return eno_select(field[f.cell_i], field[f.cell_j], mesh::p1_gradient(dual, field, f.elem_left),
                    mesh::p1_gradient(dual, field, f.elem),
                    mesh::p1_gradient(dual, field, f.elem_right), f.centroid - dual.nodes[f.cell_i],
                    f.centroid - dual.nodes[f.cell_j]);
}

Vec3 flux_divergence(const SideState& s) {
  const Vec3 U = s.W / s.rho;
  return s.grad_W * U + (s.grad_W.trace() / s.rho) * s.W - (U.dot(s.grad_rho) / s.rho) * s.W;
}

FaceStates evolve_face_states(const SideState& side_i, const SideState& side_j, double dt,
                              const HalfStepForcing& forcing, bool evolve_density) {
  if (!(side_i.rho > 0.0) || !(side_j.rho > 0.0)) {
    throw StateError("extrapolated density is nonpositive");
  }
  const Vec3 dW =
      (0.5 * dt) * (forcing.momentum - 0.5 * (flux_divergence(side_i) + flux_divergence(side_j)));
  FaceStates out{side_i.W + dW, side_j.W + dW, side_i.rho, side_j.rho};
  if (evolve_density) {
    const double drho =
        0.5 * dt * (forcing.mass - 0.5 * (side_i.grad_W.trace() + side_j.grad_W.trace()));
    out.rho_i += drho;
    out.rho_j += drho;
    if (!(out.rho_i > 0.0) || !(out.rho_j > 0.0)) {
      throw StateError("evolved density is nonpositive");
    }
  }
  return out;
}

namespace {

struct Reconstruction {
  SideState i;
  SideState j;
};

EnoValues select_slopes(Slopes mode, double f_i, double f_j, const Vec3& g_left,
                        const Vec3& g_mid, const Vec3& g_right, const Vec3& d_i, const Vec3& d_j) {
  if (mode == Slopes::eno) return eno_select(f_i, f_j, g_left, g_mid, g_right, d_i, d_j);
  return {f_i + g_left.dot(d_i), f_j + g_right.dot(d_j), g_left, g_right};
}

Reconstruction reconstruct(const DualMesh& dual, std::span<const Vec3> W,
                           std::span<const double> rho, std::span<const Mat3> gW,
                           std::span<const Vec3> grho, int k, bool extrapolate_rho,
                           Slopes slopes) {
  const auto& f = dual.interfaces[k];
  const Vec3 d_i = f.centroid - dual.nodes[f.cell_i];
  const Vec3 d_j = f.centroid - dual.nodes[f.cell_j];
  Reconstruction r;
  for (int a = 0; a < 3; ++a) {
    const auto e = select_slopes(slopes, W[f.cell_i][a], W[f.cell_j][a],
                                 gW[f.elem_left].row(a).transpose(), gW[f.elem].row(a).transpose(),
                                 gW[f.elem_right].row(a).transpose(), d_i, d_j);
    r.i.W[a] = e.value_i;
    r.j.W[a] = e.value_j;
    r.i.grad_W.row(a) = e.grad_i.transpose();
    r.j.grad_W.row(a) = e.grad_j.transpose();
  }
  const auto e = select_slopes(slopes, rho[f.cell_i], rho[f.cell_j], grho[f.elem_left],
                               grho[f.elem], grho[f.elem_right], d_i, d_j);
  r.i.grad_rho = e.grad_i;
  r.j.grad_rho = e.grad_j;
  r.i.rho = extrapolate_rho ? e.value_i : rho[f.cell_i];
  r.j.rho = extrapolate_rho ? e.value_j : rho[f.cell_j];
  return r;
}

struct ElementGradients {
  std::vector<Mat3> W;
  std::vector<Vec3> rho;
};

ElementGradients element_gradients(const DualMesh& dual, std::span<const Vec3> W,
                                   std::span<const double> rho) {
  const std::size_t ne = dual.mesh.tets.size();
  ElementGradients g{std::vector<Mat3>(ne), std::vector<Vec3>(ne)};
  for (std::size_t e = 0; e < ne; ++e) {
    g.W[e] = element_gradient(dual, W, static_cast<int>(e));
    g.rho[e] = mesh::p1_gradient(dual, rho, static_cast<int>(e));
  }
  return g;
}

}  // namespace

FaceStates evolve_face_states(const DualMesh& dual, const FlowState& state, int interface,
                              double dt, const HalfStepForcing& forcing, bool evolve_density,
                              Slopes slopes) {
  const auto& f = dual.interfaces[interface];
  std::array<int, 3> elems{f.elem_left, f.elem, f.elem_right};
  std::vector<Mat3> gW(dual.mesh.tets.size(), Mat3::Zero());
  std::vector<Vec3> grho(dual.mesh.tets.size(), Vec3::Zero());
  for (int e : elems) {
    gW[e] = element_gradient(dual, state.W, e);
    grho[e] = mesh::p1_gradient(dual, state.rho, e);
  }
  const auto r =
      reconstruct(dual, state.W, state.rho, gW, grho, interface, evolve_density, slopes);
  return evolve_face_states(r.i, r.j, dt, forcing, evolve_density);
}

std::vector<Vec3> transport_step(const DualMesh& dual, const FlowState& state,
                                 const Problem& problem, double dt, Scheme scheme,
                                 const Options& options, InterfaceFluxes* fluxes) {
  state.validate(dual);
  if (!(dt > 0.0)) throw NumericError("time step must be positive");
  const int n = static_cast<int>(dual.cells());
  const int ni = static_cast<int>(dual.interfaces.size());
  const int ne = static_cast<int>(dual.mesh.tets.size());
  const bool lader = scheme == Scheme::lader;
  const double mu = problem.mu;
  const double t = state.t;
  const double t_src = lader ? t + 0.5 * dt : t;
  const std::span<const Vec3> W(state.W);
  const std::span<const double> rho(state.rho);

  const auto U = state.velocities();
  std::vector<Mat3> grad_u;
  std::vector<Vec3> visc_div;
  if (mu > 0.0) {
    const auto Ue = lader ? evolve_viscous_states(dual, U, rho, dt, mu) : U;
    grad_u.resize(ne);
    parallel_for(ne, options.parallel, [&](int e) { grad_u[e] = element_gradient(dual, Ue, e); });
    if (lader && options.diffusion_in_evolution) visc_div = nodal_stress_divergence(dual, U, mu);
  }

  ElementGradients eg;
  std::vector<Vec3> grad_pi;
  if (lader) {
    eg = element_gradients(dual, W, rho);
    grad_pi.resize(ne);
    for (int e = 0; e < ne; ++e) {
      Vec3 g = Vec3::Zero();
      for (int k = 0; k < 4; ++k) g += state.pi[dual.mesh.tets[e][k]] * dual.elem_grads[e][k];
      grad_pi[e] = g;
    }
  }

  std::vector<Vec3> adv(ni), pres(ni), visc(ni, Vec3::Zero());
  parallel_for(ni, options.parallel, [&](int k) {
    const auto& f = dual.interfaces[k];
    if (!lader) {
      adv[k] = momentum_flux(W[f.cell_i], W[f.cell_j], rho[f.cell_i], rho[f.cell_j], f.eta,
                             options.density_term);
    } else {
      const auto r = reconstruct(dual, W, rho, eg.W, eg.rho, k, options.density_evolution,
                                 options.slopes);
      HalfStepForcing forcing;
      forcing.momentum = -grad_pi[f.elem];
      if (problem.momentum_source) forcing.momentum += problem.momentum_source(f.centroid, t);
      if (!visc_div.empty()) forcing.momentum += 0.5 * (visc_div[f.cell_i] + visc_div[f.cell_j]);
      if (problem.mass_source) forcing.mass = problem.mass_source(f.centroid, t);
      const auto s = evolve_face_states(r.i, r.j, dt, forcing, options.density_evolution);
      adv[k] = momentum_flux(s.W_i, s.W_j, s.rho_i, s.rho_j, f.eta, options.density_term);
    }
    pres[k] = pressure_face_integral(dual, state.pi, k);
    if (mu > 0.0) visc[k] = viscous_stress(grad_u[f.elem], mu) * f.eta;
  });

  std::vector<Vec3> out(n);
  parallel_for(n, options.parallel, [&](int i) {
    Vec3 acc = Vec3::Zero();
    for (const auto& l : dual.links_of(i)) {
      acc += l.orientation * (adv[l.interface] + pres[l.interface] - visc[l.interface]);
    }
    if (dual.boundary[i]) {
      const auto& v = dual.mesh.faces[i].vertices;
      acc += ((state.pi[v[0]] + state.pi[v[1]] + state.pi[v[2]]) / 3.0) * dual.boundary_eta[i];
    }
    Vec3 w = W[i] - (dt / dual.volume[i]) * acc;
    if (problem.momentum_source) w += dt * problem.momentum_source(dual.nodes[i], t_src);
    if (!w.allFinite()) throw DivergenceError("non-finite momentum in cell " + std::to_string(i));
    out[i] = w;
  });

  if (options.impose_boundary && problem.exact_momentum) {
    for (int i = 0; i < n; ++i) {
      if (dual.boundary[i]) out[i] = problem.exact_momentum(dual.nodes[i], t + dt);
    }
  }
  if (fluxes) *fluxes = InterfaceFluxes{std::move(adv), std::move(pres), std::move(visc)};
  return out;
}

}  // namespace lmn::transport
