#include "lmn/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/IterativeLinearSolvers>

namespace lmn::projection {

using mesh::DualMesh;

std::vector<double> density_from_state(std::span<const double> theta,
                                       const std::vector<std::vector<double>>& Y,
                                       const transport::PhysParams& params, double t) {
  params.validate();
  if (Y.size() != params.species()) throw StateError("mass fractions do not match species count");
  const double pbar = params.background_pressure(t);
  std::vector<double> rho(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > 0.0)) throw StateError("nonpositive temperature at point " + std::to_string(i));
    double mix = 0.0;
    for (std::size_t l = 0; l < Y.size(); ++l) mix += Y[l][i] / params.molar_masses[l];
    if (!(mix > 0.0)) throw StateError("nonpositive mixture gas constant");
    rho[i] = pbar / (params.gas_constant * theta[i] * mix);
  }
  return rho;
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double Enthalpy::operator()(double theta) const {
  if (theta == theta0) return h0;
  const double fa = cp(theta0);
  const double fb = cp(theta);
  const double fm = cp(0.5 * (theta0 + theta));
  const double whole = simpson(theta0, theta, fa, fm, fb);
  const double tol = 1e-13 * std::max(1.0, std::abs(whole));
  return h0 + adaptive_simpson(cp, theta0, theta, fa, fm, fb, whole, tol, 40);
}

double temperature_from_enthalpy(double H, const Enthalpy& h, double tol) {
  if (!h.cp) throw NumericError("specific heat is not set");
  double theta = h.theta0;
  const double scale = std::max(1.0, std::abs(H));
  for (int it = 0; it < 50; ++it) {
    const double r = h(theta) - H;
    if (std::abs(r) <= tol * scale) return theta;
    const double c = h.cp(theta);
    if (!(c > 0.0)) throw NumericError("nonpositive specific heat during Newton iteration");
    theta -= r / c;
    if (!std::isfinite(theta)) break;
  }
  throw NumericError("Newton iteration for the temperature did not converge");
}

std::vector<double> projection_source(std::span<const double> rho_old,
                                      std::span<const double> rho_new, double dt) {
  if (!(dt > 0.0)) throw NumericError("time step must be positive");
  std::vector<double> Q(rho_old.size());
  for (std::size_t i = 0; i < Q.size(); ++i) Q[i] = (rho_old[i] - rho_new[i]) / dt;
  return Q;
}

namespace {

// Divergence functional per vertex: Σ_T |T| W_T·∇z + ∫ Q z − ∫_∂Ω G z, with
// W_T the element value supplied by `element_W`.
template <class ElementW>
Eigen::VectorXd divergence_functional(const DualMesh& dual, ElementW&& element_W,
                                      std::span<const double> Q,
                                      std::span<const Vec3> boundary_W) {
  const auto& m = dual.mesh;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.vertices.size()));
  for (std::size_t e = 0; e < m.tets.size(); ++e) {
    const auto& faces = m.tet_faces[e];
    const Vec3 We = element_W(static_cast<int>(e));
    double Qe = 0.0;
    for (int k = 0; k < 4; ++k) Qe += Q[faces[k]];
    Qe *= 0.25;
    const double vol = dual.elem_volume[e];
    for (int k = 0; k < 4; ++k) {
      b[m.tets[e][k]] += vol * (We.dot(dual.elem_grads[e][k]) + 0.25 * Qe);
    }
  }
  for (std::size_t i = 0; i < dual.cells(); ++i) {
    if (!dual.boundary[i]) continue;
    const double g = boundary_W[i].dot(dual.boundary_eta[i]) / 3.0;
    for (int v : m.faces[i].vertices) b[v] -= g;
  }
  return b;
}

Vec3 element_mean(const DualMesh& dual, std::span<const Vec3> W, int e) {
  const auto& f = dual.mesh.tet_faces[e];
  return 0.25 * (W[f[0]] + W[f[1]] + W[f[2]] + W[f[3]]);
}

Vec3 element_gradient_p1(const DualMesh& dual, std::span<const double> v, int e) {
  Vec3 g = Vec3::Zero();
  for (int k = 0; k < 4; ++k) g += v[dual.mesh.tets[e][k]] * dual.elem_grads[e][k];
  return g;
}

}  // namespace

PressureSystem assemble_pressure_system(const DualMesh& dual, std::span<const Vec3> W_tilde,
                                        std::span<const double> Q,
                                        std::span<const Vec3> boundary_W, double dt) {
  if (!(dt > 0.0)) throw NumericError("time step must be positive");
  const auto& m = dual.mesh;
  const auto nv = static_cast<Eigen::Index>(m.vertices.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.tets.size() * 16);
  for (std::size_t e = 0; e < m.tets.size(); ++e) {
    const auto& g = dual.elem_grads[e];
    const double vol = dual.elem_volume[e];
    for (int a = 0; a < 4; ++a) {
      for (int c = 0; c < 4; ++c) trip.emplace_back(m.tets[e][a], m.tets[e][c], vol * g[a].dot(g[c]));
    }
  }
  PressureSystem s;
  s.stiffness.resize(nv, nv);
  s.stiffness.setFromTriplets(trip.begin(), trip.end());
  s.rhs = divergence_functional(
              dual, [&](int e) { return element_mean(dual, W_tilde, e); }, Q, boundary_W) /
          dt;
  s.defect = s.rhs.sum();
  s.rhs.array() -= s.defect / static_cast<double>(nv);
  return s;
}

std::vector<double> vertex_volumes(const DualMesh& dual) {
  std::vector<double> w(dual.mesh.vertices.size(), 0.0);
  for (std::size_t e = 0; e < dual.mesh.tets.size(); ++e) {
    for (int v : dual.mesh.tets[e]) w[v] += 0.25 * dual.elem_volume[e];
  }
  return w;
}

std::vector<double> solve_mean_zero(const PressureSystem& system, const DualMesh& dual, double tol,
                                    std::span<const double> guess) {
  const auto n = system.rhs.size();
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(static_cast<Eigen::Index>(10 * n));
  cg.compute(system.stiffness);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  if (!guess.empty()) x0 = Eigen::Map<const Eigen::VectorXd>(guess.data(), n);
  Eigen::VectorXd x = cg.solveWithGuess(system.rhs, x0);
  if (cg.info() != Eigen::Success) {
    throw NumericError("pressure solve did not converge: relative residual " +
                       std::to_string(cg.error()) + " after " + std::to_string(cg.iterations()) +
                       " iterations");
  }
  const auto w = vertex_volumes(dual);
  double mean = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    mean += w[i] * x[i];
    total += w[i];
  }
  mean /= total;
  std::vector<double> out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = x[i] - mean;
  return out;
}

std::vector<Vec3> nodal_gradient(const DualMesh& dual, std::span<const double> delta) {
  std::vector<Vec3> g(dual.cells());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Vec3 acc = Vec3::Zero();
    double vol = 0.0;
    for (int e : dual.mesh.faces[i].tets) {
      if (e < 0) continue;
      acc += dual.elem_volume[e] * element_gradient_p1(dual, delta, e);
      vol += dual.elem_volume[e];
    }
    g[i] = acc / vol;
  }
  return g;
}

std::vector<Vec3> post_project(const DualMesh& dual, std::span<const Vec3> W_tilde,
                               std::span<const double> delta, double dt,
                               std::span<const Vec3> boundary_W) {
  const auto g = nodal_gradient(dual, delta);
  std::vector<Vec3> W(W_tilde.size());
  for (std::size_t i = 0; i < W.size(); ++i) {
    W[i] = (!boundary_W.empty() && dual.boundary[i]) ? boundary_W[i] : W_tilde[i] - dt * g[i];
  }
  return W;
}

Eigen::VectorXd weak_divergence_residual(const DualMesh& dual, std::span<const Vec3> W_tilde,
                                         std::span<const double> delta, std::span<const double> Q,
                                         std::span<const Vec3> boundary_W, double dt) {
  return divergence_functional(
             dual,
             [&](int e) {
               return Vec3(element_mean(dual, W_tilde, e) -
                           dt * element_gradient_p1(dual, delta, e));
             },
             Q, boundary_W) /
         dt;
}

}  // namespace lmn::projection
