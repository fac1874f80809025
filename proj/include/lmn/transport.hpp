#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "lmn/adr1d.hpp"
#include "lmn/mesh.hpp"
#include "lmn/types.hpp"

namespace lmn::transport {

/// Momentum density and density per dual cell, pressure perturbation per mesh vertex.
struct FlowState {
  std::vector<Vec3> W;
  std::vector<double> rho;
  std::vector<double> pi;
  double t = 0.0;

  Vec3 velocity(int i) const { return W[i] / rho[i]; }
  std::vector<Vec3> velocities() const;
  /// Throws StateError on mismatched sizes, nonpositive density or non-finite values.
  void validate(const mesh::DualMesh& dual) const;
};

struct PhysParams {
  double mu = 0.0;
  std::function<double(double)> background_pressure;  // π̄(t)
  double gas_constant = 8.314;
  std::vector<double> molar_masses{1.0};

  std::size_t species() const { return molar_masses.size(); }
  void validate() const;
};

/// Z(W, ρ, η) = (W·η / ρ) W.
Vec3 normal_flux(const Vec3& W, double rho, const Vec3& eta);

/// α = max(2|U_i·η|, 2|U_j·η|) and the signed value attaining it (ties to side i).
adr1d::SignedMax rusanov_alpha(const Vec3& W_i, const Vec3& W_j, double rho_i, double rho_j,
                               const Vec3& eta);

/// Upwinded ∂Z/∂ρ Δρ contribution: (1/3) sign(ᾰ) S (S·η) (ρ_j − ρ_i) / (ρ_i + ρ_j)², S = W_i + W_j.
Vec3 density_upwind_term(const Vec3& W_i, const Vec3& W_j, double rho_i, double rho_j,
                         const Vec3& eta, double breve);

/// Rusanov flux out of cell i, optionally with the density upwind term.
Vec3 momentum_flux(const Vec3& W_i, const Vec3& W_j, double rho_i, double rho_j, const Vec3& eta,
                   bool density_term = true);

/// Cellwise form of the density correction: V_i and its upwinded counterpart G_i,
/// both already divided by |C_i|.
struct DensityVisc {
  Vec3 V = Vec3::Zero();
  Vec3 G = Vec3::Zero();
};

DensityVisc density_visc_cellwise(const mesh::DualMesh& dual, std::span<const Vec3> W,
                                  std::span<const double> rho, int cell);

enum class Approach { flux_term, cellwise };

/// (1/|C_i|) Σ_j of the advective fluxes with the density correction, assembled
/// either inside the flux or cellwise.
std::vector<Vec3> advective_residual(const mesh::DualMesh& dual, std::span<const Vec3> W,
                                     std::span<const double> rho, Approach approach);

/// Gradient G(a, b) = ∂_b f_a of the P1 interpolant on the auxiliary tetrahedron of `elem`.
Mat3 element_gradient(const mesh::DualMesh& dual, std::span<const Vec3> field, int elem);

/// μ (∇U + ∇Uᵀ − (2/3) div U I).
Mat3 viscous_stress(const Mat3& grad_u, double mu);

/// μ [∇U + ∇Uᵀ − (2/3) div U I]_{T_ij} η_ij.
Vec3 viscous_flux(const mesh::DualMesh& dual, std::span<const Vec3> U, int interface, double mu);

/// Velocities advanced half a step by the viscous term alone:
/// Ū_i = U_i + Δt/(2ρ_i) div D, with D the nodal average of the stress over
/// the elements sharing face i.
std::vector<Vec3> evolve_viscous_states(const mesh::DualMesh& dual, std::span<const Vec3> U,
                                        std::span<const double> rho, double dt, double mu);

/// [5/12 (π1 + π2) + 1/12 (π3 + π4)] η with π1, π2 on the shared edge.
Vec3 pressure_face_integral(const std::array<double, 4>& pi, const Vec3& eta);
Vec3 pressure_face_integral(const mesh::DualMesh& dual, std::span<const double> pi, int interface);

struct EnoValues {
  double value_i = 0.0;
  double value_j = 0.0;
  Vec3 grad_i = Vec3::Zero();
  Vec3 grad_j = Vec3::Zero();
};

/// `eno` picks per side between the neighbour element (T_ijL or T_ijR) and the
/// face element T_ij; `neighbour` always takes T_ijL and T_ijR.
enum class Slopes { eno, neighbour };

/// Two-candidate slope choice per side; `d_i` = N_ij − N_i, `d_j` = N_ij − N_j.
EnoValues eno_select(double f_i, double f_j, const Vec3& g_left, const Vec3& g_mid,
                     const Vec3& g_right, const Vec3& d_i, const Vec3& d_j);

EnoValues eno_reconstruct_3d(const mesh::DualMesh& dual, std::span<const double> field,
                             int interface);

/// Extrapolated state of one side of an interface with the gradients used for it.
struct SideState {
  Vec3 W = Vec3::Zero();
  double rho = 1.0;
  Mat3 grad_W = Mat3::Zero();  // (a, b) = ∂_b W_a
  Vec3 grad_rho = Vec3::Zero();
};

/// div(W ⊗ W / ρ) from the side's state and gradients.
Vec3 flux_divergence(const SideState& s);

/// Contributions to ∂_t W and ∂_t ρ at the face other than the flux divergence.
struct HalfStepForcing {
  Vec3 momentum = Vec3::Zero();
  double mass = 0.0;
};

struct FaceStates {
  Vec3 W_i = Vec3::Zero();
  Vec3 W_j = Vec3::Zero();
  double rho_i = 1.0;
  double rho_j = 1.0;
};

/// Half-step evolution with the increment shared by both sides:
/// ΔW = Δt/2 [forcing − ½(div F_i + div F_j)], Δρ = Δt/2 [forcing − ½(div W_i + div W_j)].
/// Throws StateError if an evolved density is nonpositive.
FaceStates evolve_face_states(const SideState& side_i, const SideState& side_j, double dt,
                              const HalfStepForcing& forcing, bool evolve_density = true);

/// Mesh-level variant: reconstruction of W and ρ at interface `interface`, then evolution.
FaceStates evolve_face_states(const mesh::DualMesh& dual, const FlowState& state, int interface,
                              double dt, const HalfStepForcing& forcing,
                              bool evolve_density = true, Slopes slopes = Slopes::neighbour);

enum class Scheme { order1, lader };

struct Options {
  Slopes slopes = Slopes::neighbour;
  bool density_term = true;
  bool density_evolution = true;       // lader: reconstruct and evolve ρ; otherwise cell values
  bool diffusion_in_evolution = false;  // lader: viscous term in the half-step of W
  bool impose_boundary = true;         // overwrite boundary cells with exact data
  bool parallel = false;
};

struct Problem {
  double mu = 0.0;
  std::function<Vec3(const Vec3&, double)> momentum_source;  // may be empty
  std::function<double(const Vec3&, double)> mass_source;    // may be empty
  std::function<Vec3(const Vec3&, double)> exact_momentum;   // Dirichlet data, may be empty
};

/// Net flux per interface out of cell_i, split by kind.
struct InterfaceFluxes {
  std::vector<Vec3> advective;
  std::vector<Vec3> pressure;
  std::vector<Vec3> viscous;
};

/// One explicit transport–diffusion step; returns W̃ per dual cell.
std::vector<Vec3> transport_step(const mesh::DualMesh& dual, const FlowState& state,
                                 const Problem& problem, double dt, Scheme scheme,
                                 const Options& options, InterfaceFluxes* fluxes = nullptr);

}  // namespace lmn::transport
