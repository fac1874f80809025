#include "lmn/source_check.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <type_traits>

namespace lmn::harness {

bool SourceReport::passed() const {
  for (const auto& e : equations) {
    if (!(e.relative <= tol)) return false;
  }
  return true;
}

void SourceReport::require() const {
  for (const auto& e : equations) {
    if (!(e.relative <= tol)) {
      std::ostringstream s;
      s << case_name << ": " << e.equation << " residual " << e.relative << " (relative) at x=("
        << e.x[0] << ", " << e.x[1] << ", " << e.x[2] << "), t=" << e.t;
      throw SourceInconsistencyError(s.str());
    }
  }
}

namespace {

template <class F>
auto d4(F&& f, double h) {
  using T = std::decay_t<decltype(f(h))>;
  const T r = (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
  return r;
}

void record(EquationResidual& r, double residual, double scale, const Vec3& x, double t) {
  r.scale = std::max(r.scale, scale);
  if (std::abs(residual) > r.max_residual) {
    r.max_residual = std::abs(residual);
    r.x = x;
    r.t = t;
  }
}

void finalize(std::vector<EquationResidual>& eqs) {
  for (auto& e : eqs) e.relative = e.scale > 0.0 ? e.max_residual / e.scale : e.max_residual;
}

}  // namespace

SourceReport validate_source_terms(const Case3D& c, int samples, double tol, std::uint64_t seed) {
  const Vec3 lo = c.domain.lo;
  const Vec3 span = c.domain.hi - c.domain.lo;
  const double h = 1e-4 * span.maxCoeff();
  const Vec3 e[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  const double mu = c.params.mu;

  // Velocity gradient (a, b) = ∂_b u_a and the viscous stress from it.
  auto grad_u = [&](const Vec3& x, double t) {
    Mat3 g;
    for (int b = 0; b < 3; ++b) {
      g.col(b) = d4([&](double s) { return c.u(x + s * e[b], t); }, h);
    }
    return g;
  };
  auto tau = [&](const Vec3& x, double t) { return transport::viscous_stress(grad_u(x, t), mu); };

  std::vector<EquationResidual> eqs(5);
  eqs[0].equation = "mass";
  eqs[1].equation = "momentum x";
  eqs[2].equation = "momentum y";
  eqs[3].equation = "momentum z";
  eqs[4].equation = "state";

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const Vec3 x = lo + Vec3(unit(rng), unit(rng), unit(rng)).cwiseProduct(span);
    const double t = unit(rng) * c.t_end;

    const double rho_t = d4([&](double d) { return c.rho(x, t + d); }, h);
    double divW = 0.0;
    for (int b = 0; b < 3; ++b) divW += d4([&](double d) { return c.W(x + d * e[b], t)[b]; }, h);
    const double fr = c.mass_source(x, t);
    record(eqs[0], rho_t + divW - fr,
           std::max({std::abs(rho_t), std::abs(divW), std::abs(fr)}), x, t);

    const Vec3 W_t = d4([&](double d) { return c.W(x, t + d); }, h);
    Vec3 divF = Vec3::Zero();
    Vec3 grad_pi = Vec3::Zero();
    Vec3 div_tau = Vec3::Zero();
    for (int b = 0; b < 3; ++b) {
      divF += d4(
          [&](double d) {
            const Vec3 y = x + d * e[b];
            const Vec3 W = c.W(y, t);
            return Vec3((W[b] / c.rho(y, t)) * W);
          },
          h);
      grad_pi[b] = d4([&](double d) { return c.pi(x + d * e[b], t); }, h);
      if (mu > 0.0) {
        div_tau += d4([&](double d) { return Vec3(tau(x + d * e[b], t).col(b)); }, h);
      }
    }
    const Vec3 f = c.f_u(x, t);
    const Vec3 res = W_t + divF + grad_pi - div_tau - f;
    for (int a = 0; a < 3; ++a) {
      const double scale = std::max({std::abs(W_t[a]), std::abs(divF[a]), std::abs(grad_pi[a]),
                                     std::abs(div_tau[a]), std::abs(f[a]), W_t.norm(), divF.norm()});
      record(eqs[1 + a], res[a], scale, x, t);
    }

    const double rho = c.rho(x, t);
    const double mix = c.y(x, t) / c.params.molar_masses[0];
    const double rho_state =
        c.params.background_pressure(t) / (c.params.gas_constant * c.theta(x, t) * mix);
    record(eqs[4], rho - rho_state, std::abs(rho), x, t);
  }
  finalize(eqs);
  return {c.name, tol, eqs};
}

SourceReport validate_source_terms(const adr1d::Case1D& c, int samples, double tol,
                                   std::uint64_t seed) {
  const double h = 1e-4 * (c.b - c.a);
  const auto& k = c.coeffs;
  std::vector<EquationResidual> eqs(1);
  eqs[0].equation = "advection-diffusion-reaction";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const double x = c.a + unit(rng) * (c.b - c.a);
    const double t = unit(rng) * c.t_end;
    const double q_t = d4([&](double d) { return c.exact(x, t + d); }, h);
    const double adv = d4([&](double d) { return k.lambda(x + d, t) * c.exact(x + d, t); }, h);
    double diff = 0.0;
    if (k.has_diffusion()) {
      diff = d4(
          [&](double d) {
            const double y = x + d;
            return k.alpha(y, t) * d4([&](double g) { return c.exact(y + g, t); }, h);
          },
          h);
    }
    const double src = k.source ? k.source(x, t, c.exact(x, t)) : 0.0;
    record(eqs[0], q_t + adv - diff - src,
           std::max({std::abs(q_t), std::abs(adv), std::abs(diff), std::abs(src)}),
           Vec3(x, 0.0, 0.0), t);
  }
  finalize(eqs);
  return {c.name, tol, eqs};
}

}  // namespace lmn::harness
