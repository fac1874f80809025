#include "lmn/cases.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lmn::harness {

namespace {

constexpr double kPi = std::numbers::pi;

// Background pressure making the state equation reproduce ρ = 10³/θ with
// ℛ Σ Y/M normalized to one.
transport::PhysParams normalized_params(double mu) {
  transport::PhysParams p;
  p.mu = mu;
  p.background_pressure = [](double) { return 1e3; };
  p.gas_constant = 1.0;
  p.molar_masses = {1.0};
  return p;
}

Case3D test1(SourceVariant variant) {
  Case3D c;
  c.name = "test1_euler";
  c.params = normalized_params(0.0);
  c.rho = [](const Vec3& x, double t) { return std::cos(t) + x[0] + 1.0; };
  c.pi = [](const Vec3&, double) { return 1.0; };
  c.u = [](const Vec3& x, double t) {
    return Vec3((x[0] * std::sin(t) + 1.0) / (std::cos(t) + x[0] + 1.0), 0.0, 0.0);
  };
  c.theta = [](const Vec3& x, double t) { return 1e3 / (std::cos(t) + x[0] + 1.0); };
  c.y = [](const Vec3&, double) { return 1.0; };
  c.drho_dt = [](const Vec3&, double t) { return -std::sin(t); };
  const int component = variant == SourceVariant::printed ? 2 : 0;
  c.f_u = [component](const Vec3& x, double t) {
    const double w = x[0] * std::sin(t) + 1.0;
    const double r = x[0] + std::cos(t) + 1.0;
    Vec3 f = Vec3::Zero();
    f[component] = x[0] * std::cos(t) - w * w / (r * r) + 2.0 * std::sin(t) * w / r;
    return f;
  };
  return c;
}

double test2_rho(const Vec3& x, double t) { return std::sin(kPi * x[1] * t) + 2.0; }

Vec3 test2_u(const Vec3& x, double t) {
  const double c = std::cos(kPi * x[0] * t);
  return {c * c, std::exp(-2.0 * kPi * x[1] * t), -std::cos(kPi * x[0] * x[1] * t)};
}

// f = ∂_t(ρu) + div(ρ u⊗u) + ∇π − μ(Δu + ⅓∇div u) from closed-form derivatives.
Vec3 test2_source_derived(const Vec3& p, double t, double mu) {
  const double x = p[0], y = p[1], z = p[2];
  const double rho = test2_rho(p, t);
  const double rho_t = kPi * y * std::cos(kPi * y * t);
  const double rho_y = kPi * t * std::cos(kPi * y * t);
  const Vec3 u = test2_u(p, t);
  const double e = std::exp(-2.0 * kPi * y * t);
  const double sxy = std::sin(kPi * x * y * t);
  const double cxy = std::cos(kPi * x * y * t);

  const Vec3 u_t(-kPi * x * std::sin(2.0 * kPi * x * t), -2.0 * kPi * y * e, kPi * x * y * sxy);
  Mat3 grad = Mat3::Zero();  // (a, b) = ∂_b u_a
  grad(0, 0) = -kPi * t * std::sin(2.0 * kPi * x * t);
  grad(1, 1) = -2.0 * kPi * t * e;
  grad(2, 0) = kPi * y * t * sxy;
  grad(2, 1) = kPi * x * t * sxy;
  const Vec3 lap(-2.0 * kPi * kPi * t * t * std::cos(2.0 * kPi * x * t),
                 4.0 * kPi * kPi * t * t * e, kPi * kPi * t * t * (x * x + y * y) * cxy);
  const Vec3 grad_div(-2.0 * kPi * kPi * t * t * std::cos(2.0 * kPi * x * t),
                      4.0 * kPi * kPi * t * t * e, 0.0);
  const double div_rho_u = rho * grad.trace() + rho_y * u[1];
  const double pe = std::exp(x * y * z) * std::cos(t);
  const Vec3 grad_pi(y * z * pe, x * z * pe, x * y * pe);

  return rho_t * u + rho * u_t + div_rho_u * u + rho * (grad * u) + grad_pi -
         mu * (lap + grad_div / 3.0);
}

Vec3 test2_source_printed(const Vec3& p, double t, double mu) {
  const double x = p[0], y = p[1], z = p[2];
  const double P = kPi;
  const double cx = std::cos(P * t * x), sx = std::sin(P * t * x);
  const double cy = std::cos(P * t * y), sy2 = std::sin(P * t * y) + 2.0;
  const double e2 = std::exp(-2.0 * P * t * y), e4 = std::exp(-4.0 * P * t * y);
  const double cxy = std::cos(P * t * x * y), sxy = std::sin(P * t * x * y);
  const double pe = std::exp(x * y * z) * std::cos(t);
  const double f1 = P * y * cx * cx * cy - 4.0 * P * t * sx * cx * cx * cx * sy2 -
                    (2.0 * mu * (2.0 * P * P * t * t * cx * cx - 2.0 * P * P * t * t * sx * sx)) / 3.0 +
                    2.0 * P * P * t * t * mu * cx * cx - 2.0 * P * P * t * t * mu * sx * sx +
                    P * t * e2 * cx * cx * cy + y * z * pe - 2.0 * P * x * sx * cx * sy2 -
                    2.0 * P * t * e2 * cx * cx * sy2;
  const double f2 = P * t * e4 * cy + P * y * e2 * cy - (4.0 * P * P * t * t * mu * e2) / 3.0 -
                    4.0 * P * t * e4 * sy2 + x * z * pe - 2.0 * P * y * e2 * sy2 -
                    2.0 * P * t * sx * e2 * cx * sy2;
  const double f3 = 2.0 * P * t * e2 * cxy * sy2 - P * y * cxy * cy + P * x * y * sxy * sy2 -
                    P * t * e2 * cxy * cy - P * P * t * t * x * x * mu * cxy -
                    P * P * t * t * y * y * mu * cxy + 2.0 * P * t * sx * cxy * cx * sy2 +
                    x * y * pe + P * t * x * e2 * sxy * sy2 + P * t * y * sxy * cx * cx * sy2;
  return {f1, f2, f3};
}

Case3D test2(SourceVariant variant) {
  Case3D c;
  c.name = "test2_ns";
  const double mu = 1e-2;
  c.params = normalized_params(mu);
  c.rho = test2_rho;
  c.pi = [](const Vec3& x, double t) { return std::exp(x[0] * x[1] * x[2]) * std::cos(t); };
  c.u = test2_u;
  c.theta = [](const Vec3& x, double t) { return 1e3 / test2_rho(x, t); };
  c.y = [](const Vec3&, double) { return 1.0; };
  c.drho_dt = [](const Vec3& x, double t) { return kPi * x[1] * std::cos(kPi * x[1] * t); };
  if (variant == SourceVariant::printed) {
    c.f_u = [mu](const Vec3& x, double t) { return test2_source_printed(x, t, mu); };
  } else {
    c.f_u = [mu](const Vec3& x, double t) { return test2_source_derived(x, t, mu); };
  }
  c.f_rho = [](const Vec3& p, double t) {
    const double y = p[1];
    const double e2 = std::exp(-2.0 * kPi * t * y);
    const double cy = std::cos(kPi * t * y);
    const double sy2 = std::sin(kPi * t * y) + 2.0;
    return kPi * y * cy + kPi * t * e2 * cy - 2.0 * kPi * t * e2 * sy2 -
           kPi * t * std::sin(2.0 * kPi * t * p[0]) * sy2;
  };
  return c;
}

}  // namespace

Case3D make_case_3d(const std::string& name, SourceVariant variant) {
  if (name == "test1_euler" || name == "test1") return test1(variant);
  if (name == "test2_ns" || name == "test2") return test2(variant);
  throw std::invalid_argument("unknown 3D case: " + name);
}

CaseDefinition manufactured_case(const std::string& name, SourceVariant variant) {
  if (name == "A1" || name == "A2" || name == "A3") {
    return adr1d::make_case_1d(name, variant == SourceVariant::printed);
  }
  return make_case_3d(name, variant);
}

}  // namespace lmn::harness
