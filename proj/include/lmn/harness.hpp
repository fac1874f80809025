#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lmn/cases.hpp"
#include "lmn/mesh.hpp"
#include "lmn/transport.hpp"

namespace lmn::harness {

/// A scheme row family of the convergence tables.
struct Variant {
  std::string name;
  transport::Scheme scheme = transport::Scheme::lader;
  transport::Options options;
};

/// order1, lader, lader-eno, lader-no-rho-evol or lader-no-densvisc.
Variant make_variant(const std::string& name);

/// o = ln(E_prev / E) / ln(h_prev / h).
double observed_order(double e_prev, double e, double h_prev, double h);

/// min_i CFL L_i² / (2|U_i| L_i + 2μ); CFL · min L_i when every denominator vanishes.
double cfl_timestep(const transport::FlowState& state, const mesh::DualMesh& dual, double cfl,
                    double mu);

/// Time-accumulated l²(L²) errors with a left-endpoint rectangle rule.
class ErrorNorms {
 public:
  ErrorNorms(const mesh::DualMesh& dual, const Case3D& c);
  /// Adds the contribution of `state` (at state.t) held over a step of length dt.
  void add(const transport::FlowState& state, double dt);
  double pressure() const;
  double momentum() const;
  int samples() const { return samples_; }

 private:
  const mesh::DualMesh& dual_;
  const Case3D& case_;
  std::vector<double> vertex_weight_;
  double sum_pi_ = 0.0;
  double sum_wu_ = 0.0;
  int samples_ = 0;
};

struct RunConfig {
  std::string test = "test1_euler";
  std::string variant = "lader";
  std::vector<int> levels{4, 8, 16};
  double cfl = 1.0;
  double t_end = 1.0;
  bool exact_drho_dt = false;
  bool parallel = false;
  SourceVariant sources = SourceVariant::derived;
  std::optional<bool> diffusion_in_evolution;  // default: on when μ > 0
  double solver_tol = 1e-10;
};

struct LevelResult {
  int level = 0;
  double h = 0.0;
  double err_pi = 0.0;
  double err_wu = 0.0;
  double ord_pi = 0.0;  // NaN on the first row
  double ord_wu = 0.0;
  int steps = 0;
  double wall_seconds = 0.0;
  double max_abs_Q = 0.0;
  std::string error;  // nonempty if a stage aborted the level
};

struct ConvergenceTable {
  std::string test;
  std::string variant;
  double cfl = 1.0;
  double t_end = 1.0;
  double background_pressure = 0.0;
  std::vector<LevelResult> rows;

  bool ok() const;
};

/// Full four-stage pipeline on one mesh level. Throws on any stage error.
LevelResult run_level(const Case3D& c, int n, const RunConfig& config);

/// Every level of `config`; stage errors are recorded per level.
ConvergenceTable run_case(const RunConfig& config);

void write_csv(std::ostream& out, const ConvergenceTable& table);
void write_markdown(std::ostream& out, const ConvergenceTable& table);

}  // namespace lmn::harness
