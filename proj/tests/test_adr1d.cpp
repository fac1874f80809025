#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>

#include "lmn/adr1d.hpp"

using namespace lmn;
using namespace lmn::adr1d;

TEST_CASE("signed maximum and ties") {
  auto s = signed_max(-3.0, 2.0);
  CHECK(s.alpha == 3.0);
  CHECK(s.breve == -3.0);
  s = signed_max(2.0, -2.0);
  CHECK(s.alpha == 2.0);
  CHECK(s.breve == 2.0);
  s = signed_max(0.0, 0.0);
  CHECK(s.alpha == 0.0);
  CHECK(sign_of(s.breve) == 0.0);
}

TEST_CASE("1D flux consistency and hand values") {
  for (double q : {-2.0, 0.0, 0.7, 3.0}) {
    for (double l : {-1.5, 0.0, 2.0}) {
      CHECK(flux_1d(q, q, l, l, q, FluxVariant::classic) == doctest::Approx(l * q));
      CHECK(flux_1d(q, q, l, l, q, FluxVariant::density_upwind) == doctest::Approx(l * q));
    }
  }
  CHECK(flux_1d(2.0, 1.0, 1.0, 3.0, 1.5, FluxVariant::classic) == doctest::Approx(4.0));
  CHECK(flux_1d(2.0, 1.0, 1.0, 3.0, 1.5, FluxVariant::density_upwind) == doctest::Approx(2.5));
  CHECK(flux_1d(2.0, 1.0, 2.0, 2.0, 1.5, FluxVariant::density_upwind) ==
        doctest::Approx(flux_1d(2.0, 1.0, 2.0, 2.0, 1.5, FluxVariant::classic)));
}

TEST_CASE("ENO picks the flat side") {
  const std::array<double, 5> q{0.0, 0.0, 0.0, 1.0, 1.0};
  const auto e = extrapolate_1d(q, SlopeMode::eno);
  CHECK(e.jL == 0.0);
  CHECK(e.jR == 0.0);
  const auto left = cell_extrapolation(0.0, 1.0, 1.0, SlopeMode::eno);
  CHECK(left.first == 1.0);
  CHECK(left.second == 1.0);
}

TEST_CASE("half-step evolution examples") {
  const std::array<double, 5> q{0.0, 1.0, 2.0, 3.0, 4.0};
  const std::array<double, 5> one{1.0, 1.0, 1.0, 1.0, 1.0};
  const std::array<double, 5> zero{};
  const auto ext = extrapolate_1d(q, SlopeMode::fixed);
  const auto ev = evolve_q_1d(ext, q, one, zero, 0.0, 0.0, 0.2, 1.0, Terms::advection_only);
  CHECK(ev.jR == doctest::Approx(ext.jR - 0.1 * (q[3] - q[2])));
  const auto still = evolve_q_1d(ext, q, one, zero, 0.0, 0.0, 0.0, 1.0, Terms::adr);
  CHECK(still.jR == ext.jR);
  CHECK(still.jL == ext.jL);

  const std::array<double, 5> flat{3.0, 3.0, 3.0, 3.0, 3.0};
  const auto fe = extrapolate_1d(flat, SlopeMode::fixed);
  const auto fv = evolve_q_1d(fe, flat, one, zero, 0.0, 0.0, 0.3, 0.5, Terms::adr);
  CHECK(fv.jm1R == 3.0);
  CHECK(fv.jp1L == 3.0);

  // λ = x + 2 on cells of width 0.25 centered at 0, 0.25, ...
  std::array<double, 5> lam{};
  for (int k = 0; k < 5; ++k) lam[k] = 0.25 * k + 2.0;
  const auto le = evolve_lambda_1d(lam, 0.0, 0.0, 0.1);
  CHECK(le.jR == doctest::Approx(lam[2] + 0.125));
  const auto lt = evolve_lambda_1d(flat, 2.0, 2.0, 0.1);
  CHECK(lt.jR - 3.0 == doctest::Approx(0.1));
}

TEST_CASE("zero coefficients leave the state unchanged") {
  Grid1D g{0.0, 1.0, 16};
  Coeffs1D c;
  c.lambda = [](double, double) { return 0.0; };
  State1D s;
  s.q.resize(16);
  for (int j = 0; j < 16; ++j) s.q[j] = std::sin(g.center(j));
  Options opt;
  opt.boundary = Boundary::periodic;
  for (auto scheme : {Scheme::order1, Scheme::lader}) {
    const auto n = step_1d(g, s, c, 0.01, scheme, opt);
    for (int j = 0; j < 16; ++j) CHECK(n.q[j] == s.q[j]);
  }
}

TEST_CASE("periodic conservation") {
  Grid1D g{0.0, 1.0, 64};
  Coeffs1D c;
  c.lambda = [](double x, double) { return 1.0 + 0.5 * std::sin(2.0 * M_PI * x); };
  c.alpha = [](double, double) { return 1e-3; };
  State1D s;
  s.q.resize(64);
  for (int j = 0; j < 64; ++j) s.q[j] = std::exp(-20.0 * (g.center(j) - 0.5) * (g.center(j) - 0.5));
  for (auto scheme : {Scheme::order1, Scheme::lader}) {
    for (auto slopes : {SlopeMode::fixed, SlopeMode::eno}) {
      Options opt;
      opt.boundary = Boundary::periodic;
      opt.slopes = slopes;
      State1D cur = s;
      const double m0 = std::accumulate(s.q.begin(), s.q.end(), 0.0);
      for (int n = 0; n < 20; ++n) {
        const double before = std::accumulate(cur.q.begin(), cur.q.end(), 0.0);
        cur = step_1d(g, cur, c, 0.004, scheme, opt);
        CHECK(std::accumulate(cur.q.begin(), cur.q.end(), 0.0) ==
              doctest::Approx(before).epsilon(1e-12));
      }
      CHECK(std::accumulate(cur.q.begin(), cur.q.end(), 0.0) == doctest::Approx(m0).epsilon(1e-12));
    }
  }
}

TEST_CASE("Dirichlet telescoping") {
  const auto c = make_case_1d("A3");
  Grid1D g{c.a, c.b, 40};
  State1D s;
  s.q = cell_averages(g, [&](double x) { return c.exact(x, 0.0); }, 0, 40);
  Options opt;
  StepFluxes fl;
  const double dt = 0.01;
  const auto n = step_1d(g, s, c.coeffs, dt, Scheme::lader, opt, c.exact, &fl);
  double change = 0.0, src = 0.0;
  for (int j = 0; j < 40; ++j) {
    change += g.dx() * (n.q[j] - s.q[j]);
    src += g.dx() * fl.source[j];
  }
  const double boundary = -dt * (fl.advective[40] - fl.advective[0]) +
                          dt / g.dx() * (fl.diffusive[40] - fl.diffusive[0]);
  CHECK(change == doctest::Approx(boundary + src).epsilon(1e-12));
}

TEST_CASE("lader with zero slopes and no evolution reduces to order one") {
  const auto c = make_case_1d("A1");
  auto k = c.coeffs;
  k.source = nullptr;
  Grid1D g{c.a, c.b, 32};
  State1D s;
  s.q = cell_averages(g, [&](double x) { return c.exact(x, 0.0); }, 0, 32);
  Options lo;
  lo.slopes = SlopeMode::zero;
  lo.evolve = false;
  lo.lambda_lader = false;
  const auto a = step_1d(g, s, k, 0.01, Scheme::lader, lo, c.exact);
  const auto b = step_1d(g, s, k, 0.01, Scheme::order1, Options{}, c.exact);
  for (int j = 0; j < 32; ++j) CHECK(a.q[j] == doctest::Approx(b.q[j]).epsilon(1e-14));
}

TEST_CASE("time step rule") {
  const auto c = make_case_1d("A1");
  Grid1D g{c.a, c.b, 100};
  const double lmax = c.coeffs.lambda(g.center(99), 0.0);
  CHECK(stable_dt(g, c.coeffs, 0.0) == doctest::Approx(0.5 * g.dx() / lmax));
}

TEST_CASE("order gates on A1") {
  const auto c = make_case_1d("A1");
  Options fixed;
  const auto o1 = run_convergence_1d(c, Scheme::order1, fixed, {256, 512});
  CHECK(o1.rows[1].order.l1 > 0.9);
  CHECK(o1.rows[1].order.l1 < 1.05);
  Options eno;
  eno.slopes = SlopeMode::eno;
  const auto l2 = run_convergence_1d(c, Scheme::lader, eno, {256, 512});
  CHECK(l2.rows[1].order.l1 > 1.9);
  CHECK(l2.rows[1].order.l1 < 2.1);
}

TEST_CASE("case registry") {
  const auto a1 = make_case_1d("A1");
  CHECK(a1.exact(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(a1.exact(0.5, 0.0) == doctest::Approx(std::exp(-0.5)));
  CHECK_THROWS_AS(make_case_1d("A9"), std::invalid_argument);
  CHECK_THROWS_AS(run_convergence_1d(a1, Scheme::order1, Options{}, {16, 8}), std::invalid_argument);
}
