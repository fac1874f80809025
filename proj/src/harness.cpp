#include "lmn/harness.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lmn/projection.hpp"

namespace lmn::harness {

using mesh::DualMesh;
using transport::FlowState;

Variant make_variant(const std::string& name) {
  Variant v;
  v.name = name;
  if (name == "order1") {
    v.scheme = transport::Scheme::order1;
  } else if (name == "lader") {
    v.scheme = transport::Scheme::lader;
  } else if (name == "lader-eno") {
    v.options.slopes = transport::Slopes::eno;
  } else if (name == "lader-no-rho-evol") {
    v.options.density_evolution = false;
  } else if (name == "lader-no-densvisc") {
    v.options.density_term = false;
  } else {
    throw std::invalid_argument("unknown scheme variant: " + name);
  }
  return v;
}

double observed_order(double e_prev, double e, double h_prev, double h) {
  return std::log(e_prev / e) / std::log(h_prev / h);
}

double cfl_timestep(const FlowState& state, const DualMesh& dual, double cfl, double mu) {
  if (!(cfl > 0.0)) throw std::invalid_argument("CFL must be positive");
  double dt = std::numeric_limits<double>::infinity();
  double l_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dual.cells(); ++i) {
    const double L = dual.length_scale[i];
    l_min = std::min(l_min, L);
    const double den = 2.0 * state.velocity(static_cast<int>(i)).norm() * L + 2.0 * mu;
    if (den > 0.0) dt = std::min(dt, cfl * L * L / den);
  }
  return std::isfinite(dt) ? dt : cfl * l_min;
}

ErrorNorms::ErrorNorms(const DualMesh& dual, const Case3D& c)
    : dual_(dual), case_(c), vertex_weight_(projection::vertex_volumes(dual)) {}

void ErrorNorms::add(const FlowState& state, double dt) {
  double wu = 0.0;
  for (std::size_t i = 0; i < dual_.cells(); ++i) {
    wu += dual_.volume[i] * (state.W[i] - case_.W(dual_.nodes[i], state.t)).squaredNorm();
  }
  const auto& verts = dual_.mesh.vertices;
  std::vector<double> ex(verts.size());
  double mean_num = 0.0, mean_ex = 0.0, total = 0.0;
  for (std::size_t v = 0; v < verts.size(); ++v) {
    ex[v] = case_.pi(verts[v], state.t);
    mean_num += vertex_weight_[v] * state.pi[v];
    mean_ex += vertex_weight_[v] * ex[v];
    total += vertex_weight_[v];
  }
  mean_num /= total;
  mean_ex /= total;
  double pe = 0.0;
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const double d = (state.pi[v] - mean_num) - (ex[v] - mean_ex);
    pe += vertex_weight_[v] * d * d;
  }
  sum_wu_ += dt * wu;
  sum_pi_ += dt * pe;
  ++samples_;
}

double ErrorNorms::pressure() const {
  if (samples_ == 0) throw std::logic_error("error norms of an empty history");
  return std::sqrt(sum_pi_);
}

double ErrorNorms::momentum() const {
  if (samples_ == 0) throw std::logic_error("error norms of an empty history");
  return std::sqrt(sum_wu_);
}

bool ConvergenceTable::ok() const {
  for (const auto& r : rows) {
    if (!r.error.empty()) return false;
  }
  return !rows.empty();
}

namespace {

std::vector<double> nodal_density(const DualMesh& dual, const Case3D& c, double t) {
  const std::size_t n = dual.cells();
  std::vector<double> theta(n);
  std::vector<std::vector<double>> Y(1, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = c.theta(dual.nodes[i], t);
    Y[0][i] = c.y(dual.nodes[i], t);
  }
  return projection::density_from_state(theta, Y, c.params, t);
}

std::vector<Vec3> boundary_momentum(const DualMesh& dual, const Case3D& c, double t) {
  std::vector<Vec3> b(dual.cells(), Vec3::Zero());
  for (std::size_t i = 0; i < dual.cells(); ++i) {
    if (dual.boundary[i]) b[i] = c.W(dual.nodes[i], t);
  }
  return b;
}

}  // namespace

LevelResult run_level(const Case3D& c, int n, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const DualMesh dual = mesh::build_dual_mesh(mesh::build_box_tet_mesh(n, c.domain));
  auto variant = make_variant(config.variant);
  variant.options.parallel = config.parallel;
  variant.options.diffusion_in_evolution =
      config.diffusion_in_evolution.value_or(c.params.mu > 0.0);

  transport::Problem problem;
  problem.mu = c.params.mu;
  problem.momentum_source = c.f_u;
  problem.mass_source = c.f_rho;
  problem.exact_momentum = [&c](const Vec3& x, double t) { return c.W(x, t); };

  FlowState state;
  state.t = 0.0;
  state.rho = nodal_density(dual, c, 0.0);
  state.W.resize(dual.cells());
  for (std::size_t i = 0; i < dual.cells(); ++i) state.W[i] = c.W(dual.nodes[i], 0.0);
  state.pi.resize(dual.mesh.vertices.size());
  for (std::size_t v = 0; v < state.pi.size(); ++v) state.pi[v] = c.pi(dual.mesh.vertices[v], 0.0);

  const double t_end = config.t_end > 0.0 ? config.t_end : c.t_end;
  ErrorNorms norms(dual, c);
  LevelResult r;
  r.level = n;
  r.h = (c.domain.hi[0] - c.domain.lo[0]) / n;
  while (state.t < t_end * (1.0 - 1e-12)) {
    double dt = cfl_timestep(state, dual, config.cfl, c.params.mu);
    if (state.t + dt > t_end) dt = t_end - state.t;
    norms.add(state, dt);

    const auto W_tilde =
        transport::transport_step(dual, state, problem, dt, variant.scheme, variant.options);
    const double t_new = state.t + dt;
    auto rho_new = nodal_density(dual, c, t_new);
    std::vector<double> Q(dual.cells());
    if (config.exact_drho_dt) {
      for (std::size_t i = 0; i < Q.size(); ++i) Q[i] = -c.drho_dt(dual.nodes[i], t_new);
    } else {
      Q = projection::projection_source(state.rho, rho_new, dt);
    }
    for (std::size_t i = 0; i < Q.size(); ++i) {
      Q[i] += c.mass_source(dual.nodes[i], t_new);
      r.max_abs_Q = std::max(r.max_abs_Q, std::abs(Q[i]));
    }
    const auto bW = boundary_momentum(dual, c, t_new);
    const auto system = projection::assemble_pressure_system(dual, W_tilde, Q, bW, dt);
    const auto delta = projection::solve_mean_zero(system, dual, config.solver_tol);

    state.W = projection::post_project(dual, W_tilde, delta, dt, bW);
    for (std::size_t v = 0; v < state.pi.size(); ++v) state.pi[v] += delta[v];
    state.rho = std::move(rho_new);
    state.t = t_new;
    ++r.steps;
  }
  r.err_pi = norms.pressure();
  r.err_wu = norms.momentum();
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ConvergenceTable run_case(const RunConfig& config) {
  const Case3D c = make_case_3d(config.test, config.sources);
  ConvergenceTable table;
  table.test = c.name;
  table.variant = config.variant;
  table.cfl = config.cfl;
  table.t_end = config.t_end > 0.0 ? config.t_end : c.t_end;
  table.background_pressure = c.params.background_pressure(0.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int n : config.levels) {
    LevelResult r;
    try {
      r = run_level(c, n, config);
    } catch (const std::exception& e) {
      r.level = n;
      r.h = 1.0 / n;
      r.err_pi = r.err_wu = nan;
      r.error = e.what();
    }
    r.ord_pi = r.ord_wu = nan;
    if (!table.rows.empty()) {
      const auto& p = table.rows.back();
      r.ord_pi = observed_order(p.err_pi, r.err_pi, p.h, r.h);
      r.ord_wu = observed_order(p.err_wu, r.err_wu, p.h, r.h);
    }
    table.rows.push_back(r);
  }
  return table;
}

namespace {

std::string fmt(double v, int prec, bool sci) {
  if (std::isnan(v)) return "";
  std::ostringstream s;
  if (sci) s << std::scientific;
  else s << std::fixed;
  s << std::setprecision(prec) << v;
  return s.str();
}

}  // namespace

void write_csv(std::ostream& out, const ConvergenceTable& t) {
  out << "# test=" << t.test << " scheme=" << t.variant << " cfl=" << t.cfl << " tend=" << t.t_end
      << " background_pressure=" << t.background_pressure << "\n";
  out << "level,h,err_pi,ord_pi,err_wu,ord_wu,steps,wall_seconds\n";
  for (const auto& r : t.rows) {
    out << r.level << ',' << fmt(r.h, 6, false) << ',' << fmt(r.err_pi, 6, true) << ','
        << fmt(r.ord_pi, 4, false) << ',' << fmt(r.err_wu, 6, true) << ','
        << fmt(r.ord_wu, 4, false) << ',' << r.steps << ',' << fmt(r.wall_seconds, 3, false);
    if (!r.error.empty()) out << ",\"" << r.error << '"';
    out << '\n';
  }
}

void write_markdown(std::ostream& out, const ConvergenceTable& t) {
  out << "**" << t.test << "**, scheme `" << t.variant << "`, CFL " << t.cfl << ", t_end "
      << t.t_end << ", background pressure " << t.background_pressure << "\n\n";
  out << "| N | h | E(pi) | o(pi) | E(w_u) | o(w_u) | steps | wall [s] |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : t.rows) {
    out << "| " << r.level << " | " << fmt(r.h, 4, false) << " | " << fmt(r.err_pi, 3, true)
        << " | " << fmt(r.ord_pi, 2, false) << " | " << fmt(r.err_wu, 3, true) << " | "
        << fmt(r.ord_wu, 2, false) << " | " << r.steps << " | " << fmt(r.wall_seconds, 2, false)
        << " |";
    if (!r.error.empty()) out << " error: " << r.error;
    out << '\n';
  }
}

}  // namespace lmn::harness
