#pragma once

#include <functional>
#include <string>
#include <variant>

#include "lmn/adr1d.hpp"
#include "lmn/mesh.hpp"
#include "lmn/transport.hpp"
#include "lmn/types.hpp"

namespace lmn::harness {

using ScalarField = std::function<double(const Vec3&, double)>;
using VectorField = std::function<Vec3(const Vec3&, double)>;

/// Manufactured 3D flow: exact fields, sources and physical data.
struct Case3D {
  std::string name;
  mesh::Box domain = mesh::Box::unit();
  double t_end = 1.0;
  transport::PhysParams params;

  ScalarField rho;
  ScalarField pi;
  VectorField u;
  ScalarField theta;
  ScalarField y;  // mass fraction of the single species
  VectorField f_u;
  ScalarField f_rho;    // may be empty
  ScalarField drho_dt;  // analytic ∂_t ρ

  Vec3 W(const Vec3& x, double t) const { return rho(x, t) * u(x, t); }
  double mass_source(const Vec3& x, double t) const { return f_rho ? f_rho(x, t) : 0.0; }
};

/// `derived` uses sources obtained by substituting the exact fields; `printed`
/// uses the expressions exactly as originally typeset.
enum class SourceVariant { derived, printed };

/// test1_euler or test2_ns. Throws std::invalid_argument for other names.
Case3D make_case_3d(const std::string& name, SourceVariant variant = SourceVariant::derived);

using CaseDefinition = std::variant<Case3D, adr1d::Case1D>;

/// Any of test1_euler, test2_ns, A1, A2, A3.
CaseDefinition manufactured_case(const std::string& name,
                                 SourceVariant variant = SourceVariant::derived);

}  // namespace lmn::harness
