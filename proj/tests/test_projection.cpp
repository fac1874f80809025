#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lmn/mesh.hpp"
#include "lmn/projection.hpp"

using namespace lmn;
using namespace lmn::projection;

namespace {

constexpr double kPi = std::numbers::pi;

double neumann_exact(const Vec3& x) {
  return std::cos(kPi * x.x()) * std::cos(kPi * x.y()) * std::cos(kPi * x.z());
}

double poisson_error(int n) {
  const auto d = mesh::build_dual_mesh(mesh::build_box_tet_mesh(n));
  std::vector<Vec3> zero(d.cells(), Vec3::Zero());
  std::vector<double> Q(d.cells());
  for (std::size_t i = 0; i < d.cells(); ++i) Q[i] = 3.0 * kPi * kPi * neumann_exact(d.nodes[i]);
  const auto sys = assemble_pressure_system(d, zero, Q, zero, 1.0);
  const auto delta = solve_mean_zero(sys, d, 1e-12);
  const auto w = vertex_volumes(d);
  double mean = 0.0, total = 0.0;
  for (std::size_t v = 0; v < w.size(); ++v) {
    mean += w[v] * neumann_exact(d.mesh.vertices[v]);
    total += w[v];
  }
  mean /= total;
  double e = 0.0;
  for (std::size_t v = 0; v < w.size(); ++v) {
    const double diff = delta[v] - (neumann_exact(d.mesh.vertices[v]) - mean);
    e += w[v] * diff * diff;
  }
  return std::sqrt(e);
}

}  // namespace

TEST_CASE("state equation") {
  transport::PhysParams p;
  p.background_pressure = [](double) { return 1e5; };
  p.gas_constant = 8.314;
  p.molar_masses = {0.028, 0.032};
  const std::vector<double> theta{300.0, 600.0};
  const std::vector<std::vector<double>> Y{{0.7, 0.7}, {0.3, 0.3}};
  const auto rho = density_from_state(theta, Y, p, 0.0);
  const double mix = 0.7 / 0.028 + 0.3 / 0.032;
  CHECK(rho[0] == doctest::Approx(1e5 / (8.314 * 300.0 * mix)));
  CHECK(rho[1] == doctest::Approx(rho[0] / 2.0));
}

TEST_CASE("temperature from enthalpy") {
  Enthalpy h;
  h.h0 = 1000.0;
  h.cp = [](double t) { return 1000.0 + 0.5 * t; };
  auto exact = [&](double t) {
    return h.h0 + 1000.0 * (t - h.theta0) + 0.25 * (t * t - h.theta0 * h.theta0);
  };
  CHECK(h(350.0) == doctest::Approx(exact(350.0)).epsilon(1e-12));
  for (double t : {250.0, 300.0, 800.0, 1500.0}) {
    CHECK(temperature_from_enthalpy(exact(t), h) == doctest::Approx(t).epsilon(1e-10));
  }
  Enthalpy bad;
  bad.cp = [](double) { return 0.0; };
  CHECK_THROWS_AS(temperature_from_enthalpy(5.0, bad), NumericError);
  CHECK_THROWS_AS(temperature_from_enthalpy(5.0, Enthalpy{}), NumericError);
}

TEST_CASE("projection source") {
  const std::vector<double> a{2.0, 3.0}, b{1.0, 3.5};
  const auto Q = projection_source(a, b, 0.5);
  CHECK(Q[0] == doctest::Approx(2.0));
  CHECK(Q[1] == doctest::Approx(-1.0));
  CHECK_THROWS_AS(projection_source(a, b, 0.0), NumericError);
}

TEST_CASE("stiffness is symmetric with constant null space") {
  const auto d = mesh::build_dual_mesh(mesh::build_box_tet_mesh(3));
  std::vector<Vec3> zero(d.cells(), Vec3::Zero());
  std::vector<double> Q(d.cells(), 0.0);
  const auto sys = assemble_pressure_system(d, zero, Q, zero, 1.0);
  const Eigen::MatrixXd K(sys.stiffness);
  CHECK((K - K.transpose()).norm() < 1e-13);
  CHECK((K * Eigen::VectorXd::Ones(K.rows())).norm() < 1e-13);
  double volume = 0.0;
  for (double w : vertex_volumes(d)) volume += w;
  CHECK(volume == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Neumann Poisson converges at second order") {
  const double e4 = poisson_error(4), e8 = poisson_error(8), e16 = poisson_error(16);
  const double o1 = std::log(e4 / e8) / std::log(2.0);
  const double o2 = std::log(e8 / e16) / std::log(2.0);
  CAPTURE(e4);
  CAPTURE(e8);
  CAPTURE(e16);
  CHECK(o1 > 1.8);
  CHECK(o2 > 1.9);
  CHECK(o2 < 2.2);
}

TEST_CASE("post-projection field satisfies the weak divergence condition") {
  const auto d = mesh::build_dual_mesh(mesh::build_box_tet_mesh(4));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> W(d.cells()), bW(d.cells(), Vec3::Zero());
  std::vector<double> Q(d.cells());
  for (std::size_t i = 0; i < d.cells(); ++i) {
    W[i] = Vec3(u(rng), u(rng), u(rng));
    Q[i] = u(rng);
    if (d.boundary[i]) bW[i] = Vec3(u(rng), u(rng), u(rng));
  }
  const double dt = 0.01;
  const double tol = 1e-12;
  const auto sys = assemble_pressure_system(d, W, Q, bW, dt);
  const auto delta = solve_mean_zero(sys, d, tol);
  const auto r = weak_divergence_residual(d, W, delta, Q, bW, dt);
  const double defect = sys.defect / static_cast<double>(r.size());
  CHECK((r.array() - defect).matrix().norm() <= 10.0 * tol * sys.rhs.norm());

  // The updated field changes only the interior and resets the boundary.
  const auto Wn = post_project(d, W, delta, dt, bW);
  const auto g = nodal_gradient(d, delta);
  for (std::size_t i = 0; i < d.cells(); ++i) {
    if (d.boundary[i]) CHECK(Wn[i] == bW[i]);
    else CHECK((Wn[i] - (W[i] - dt * g[i])).norm() < 1e-15);
  }
}

TEST_CASE("pressure correction is invariant to constants") {
  const auto d = mesh::build_dual_mesh(mesh::build_box_tet_mesh(3));
  std::vector<double> delta(d.mesh.vertices.size()), shifted(delta.size());
  for (std::size_t v = 0; v < delta.size(); ++v) {
    delta[v] = std::sin(d.mesh.vertices[v].x() * 3.0);
    shifted[v] = delta[v] + 17.0;
  }
  const auto a = nodal_gradient(d, delta);
  const auto b = nodal_gradient(d, shifted);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() < 1e-12);
}

TEST_CASE("nodal gradient is exact for affine fields") {
  const auto d = mesh::build_dual_mesh(mesh::build_box_tet_mesh(3));
  const Vec3 g(1.5, -2.0, 0.25);
  std::vector<double> f;
  for (const auto& v : d.mesh.vertices) f.push_back(g.dot(v) + 4.0);
  for (const auto& n : nodal_gradient(d, f)) CHECK((n - g).norm() < 1e-12);
}
