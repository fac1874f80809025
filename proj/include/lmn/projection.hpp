#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "lmn/mesh.hpp"
#include "lmn/transport.hpp"
#include "lmn/types.hpp"

namespace lmn::projection {

/// ρ = π̄(t) / (ℛ θ Σ_l Y_l / M_l). `Y[l]` holds the mass fraction of species l per point.
std::vector<double> density_from_state(std::span<const double> theta,
                                       const std::vector<std::vector<double>>& Y,
                                       const transport::PhysParams& params, double t);

/// h(θ) = h0 + ∫_{θ0}^{θ} c_π(r) dr.
struct Enthalpy {
  double h0 = 0.0;
  double theta0 = 273.15;
  std::function<double(double)> cp;

  double operator()(double theta) const;
};

/// Newton inversion of h(θ) = H started at θ0, to tol·max(1, |H|). Throws
/// NumericError after 50 iterations or on a nonpositive c_π.
double temperature_from_enthalpy(double H, const Enthalpy& h, double tol = 1e-10);

/// Q = (ρ_old − ρ_new) / Δt.
std::vector<double> projection_source(std::span<const double> rho_old,
                                      std::span<const double> rho_new, double dt);

struct PressureSystem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd rhs;
  double defect = 0.0;  // sum of the raw rhs, removed before solving
};

/// P1 Neumann problem for the pressure correction over mesh vertices.
/// `boundary_W` holds the prescribed momentum at boundary dual nodes (its
/// normal component is the Neumann datum); interior entries are ignored.
PressureSystem assemble_pressure_system(const mesh::DualMesh& dual, std::span<const Vec3> W_tilde,
                                        std::span<const double> Q,
                                        std::span<const Vec3> boundary_W, double dt);

/// Lumped P1 mass per mesh vertex, Σ |T| / 4 over adjacent elements.
std::vector<double> vertex_volumes(const mesh::DualMesh& dual);

/// Jacobi-preconditioned conjugate gradients, then the weighted mean is removed.
/// Throws NumericError if the relative residual does not reach `tol` in 10·n iterations.
std::vector<double> solve_mean_zero(const PressureSystem& system, const mesh::DualMesh& dual,
                                    double tol = 1e-10, std::span<const double> guess = {});

/// Volume-weighted average of the P1 gradient of δ over the elements sharing face i.
std::vector<Vec3> nodal_gradient(const mesh::DualMesh& dual, std::span<const double> delta);

/// W = W̃ − Δt ∇δ per dual node; boundary nodes are reset from `boundary_W` when given.
std::vector<Vec3> post_project(const mesh::DualMesh& dual, std::span<const Vec3> W_tilde,
                               std::span<const double> delta, double dt,
                               std::span<const Vec3> boundary_W = {});

/// Per-vertex residual of the weak divergence condition for the element-wise
/// corrected field W̃_T − Δt ∇δ_T, scaled by 1/Δt like the assembled rhs.
Eigen::VectorXd weak_divergence_residual(const mesh::DualMesh& dual, std::span<const Vec3> W_tilde,
                                         std::span<const double> delta, std::span<const double> Q,
                                         std::span<const Vec3> boundary_W, double dt);

}  // namespace lmn::projection
