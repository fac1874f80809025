#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lmn/harness.hpp"

using namespace lmn;
using namespace lmn::harness;

TEST_CASE("observed order formula") {
  CHECK(observed_order(4.0, 1.0, 0.2, 0.1) == doctest::Approx(2.0));
  CHECK(observed_order(1e-2, 5e-3, 0.5, 0.25) == doctest::Approx(1.0));
  CHECK(observed_order(3.0, 1.0, 1.0, 1.0 / 3.0) == doctest::Approx(1.0));
}

TEST_CASE("variant registry") {
  CHECK(make_variant("order1").scheme == transport::Scheme::order1);
  CHECK(make_variant("lader").options.density_evolution);
  CHECK(make_variant("lader").options.slopes == transport::Slopes::neighbour);
  CHECK(make_variant("lader-eno").options.slopes == transport::Slopes::eno);
  CHECK_FALSE(make_variant("lader-no-rho-evol").options.density_evolution);
  CHECK_FALSE(make_variant("lader-no-densvisc").options.density_term);
  CHECK_THROWS_AS(make_variant("rk4"), std::invalid_argument);
}

TEST_CASE("CFL time step") {
  const auto d = mesh::build_dual_mesh(mesh::build_box_tet_mesh(2));
  transport::FlowState s;
  s.W.assign(d.cells(), Vec3::Zero());
  s.rho.assign(d.cells(), 1.0);
  s.pi.assign(d.mesh.vertices.size(), 0.0);
  double lmin = 1e300;
  for (double l : d.length_scale) lmin = std::min(lmin, l);
  CHECK(cfl_timestep(s, d, 0.8, 0.1) == doctest::Approx(0.8 * lmin * lmin / 0.2));
  CHECK(cfl_timestep(s, d, 0.8, 0.0) == doctest::Approx(0.8 * lmin));
  s.W.assign(d.cells(), Vec3(1.0, 0.0, 0.0));
  CHECK(cfl_timestep(s, d, 1.0, 0.0) == doctest::Approx(lmin / 2.0));
  CHECK_THROWS_AS(cfl_timestep(s, d, 0.0, 0.0), std::invalid_argument);

  const auto fine = mesh::build_dual_mesh(mesh::build_box_tet_mesh(4));
  transport::FlowState f;
  f.W.assign(fine.cells(), Vec3::Zero());
  f.rho.assign(fine.cells(), 1.0);
  f.pi.assign(fine.mesh.vertices.size(), 0.0);
  s.W.assign(d.cells(), Vec3::Zero());
  CHECK(cfl_timestep(s, d, 1.0, 1.0) / cfl_timestep(f, fine, 1.0, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("error norms") {
  const auto d = mesh::build_dual_mesh(mesh::build_box_tet_mesh(3));
  const auto c = make_case_3d("test1_euler");
  auto exact_state = [&](double t) {
    transport::FlowState s;
    s.t = t;
    for (const auto& x : d.nodes) {
      s.W.push_back(c.W(x, t));
      s.rho.push_back(c.rho(x, t));
    }
    for (const auto& v : d.mesh.vertices) s.pi.push_back(c.pi(v, t));
    return s;
  };
  ErrorNorms exact(d, c);
  CHECK_THROWS_AS(exact.momentum(), std::logic_error);
  for (int n = 0; n < 4; ++n) exact.add(exact_state(0.25 * n), 0.25);
  CHECK(exact.momentum() == 0.0);
  CHECK(exact.pressure() == 0.0);
  CHECK(exact.samples() == 4);

  ErrorNorms offset(d, c);
  for (int n = 0; n < 4; ++n) {
    auto s = exact_state(0.25 * n);
    for (auto& w : s.W) w.x() += 0.3;
    for (auto& p : s.pi) p += 5.0;
    offset.add(s, 0.25);
  }
  CHECK(offset.momentum() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(offset.pressure() == doctest::Approx(0.0).epsilon(1e-12));

  // A synthetic h² error field gives order two.
  auto synthetic = [&](int n) {
    const auto dn = mesh::build_dual_mesh(mesh::build_box_tet_mesh(n));
    ErrorNorms e(dn, c);
    transport::FlowState s;
    const double h = 1.0 / n;
    for (const auto& x : dn.nodes) {
      s.W.push_back(c.W(x, 0.0) + h * h * Vec3(std::sin(3.0 * x.x()), 0.0, 0.0));
      s.rho.push_back(c.rho(x, 0.0));
    }
    for (const auto& v : dn.mesh.vertices) s.pi.push_back(c.pi(v, 0.0));
    e.add(s, 1.0);
    return e.momentum();
  };
  CHECK(observed_order(synthetic(4), synthetic(8), 0.25, 0.125) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("pipeline on a tiny mesh") {
  RunConfig cfg;
  cfg.test = "test1_euler";
  cfg.variant = "order1";
  cfg.levels = {2, 3};
  cfg.t_end = 0.05;
  const auto table = run_case(cfg);
  REQUIRE(table.ok());
  REQUIRE(table.rows.size() == 2);
  CHECK(std::isnan(table.rows[0].ord_wu));
  CHECK(table.rows[1].ord_wu ==
        doctest::Approx(observed_order(table.rows[0].err_wu, table.rows[1].err_wu, 0.5, 1.0 / 3.0)));
  for (const auto& r : table.rows) {
    CHECK(r.steps > 0);
    CHECK(r.err_wu > 0.0);
    CHECK(r.err_wu < 1e-1);
  }
  std::ostringstream csv;
  write_csv(csv, table);
  CHECK(csv.str().find("level,h,err_pi,ord_pi,err_wu,ord_wu,steps,wall_seconds") != std::string::npos);
  CHECK(csv.str().find("background_pressure=1000") != std::string::npos);
  std::ostringstream md;
  write_markdown(md, table);
  CHECK(md.str().find("| N |") != std::string::npos);
}

TEST_CASE("constant density reduces to the incompressible pipeline") {
  Case3D c;
  c.name = "constant_density";
  c.params.mu = 0.0;
  c.params.background_pressure = [](double) { return 1.0; };
  c.params.gas_constant = 1.0;
  c.rho = [](const Vec3&, double) { return 1.0; };
  c.theta = [](const Vec3&, double) { return 1.0; };
  c.y = [](const Vec3&, double) { return 1.0; };
  c.pi = [](const Vec3&, double) { return 0.0; };
  c.u = [](const Vec3&, double) { return Vec3(1.0, 0.0, 0.0); };
  c.f_u = [](const Vec3&, double) { return Vec3::Zero(); };
  c.drho_dt = [](const Vec3&, double) { return 0.0; };
  RunConfig cfg;
  cfg.variant = "lader";
  cfg.t_end = 0.05;
  const auto r = run_level(c, 2, cfg);
  CHECK(r.max_abs_Q == 0.0);
  CHECK(r.err_wu < 1e-8);
}

TEST_CASE("stage errors are recorded per level") {
  RunConfig cfg;
  cfg.test = "test1_euler";
  cfg.variant = "order1";
  cfg.levels = {2};
  cfg.t_end = 0.01;
  cfg.solver_tol = 1e-300;
  const auto table = run_case(cfg);
  CHECK_FALSE(table.ok());
  CHECK_FALSE(table.rows[0].error.empty());
}
