#include "lmn/adr1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lmn::adr1d {

SignedMax signed_max(double a, double b) {
  if (std::abs(b) > std::abs(a)) return {std::abs(b), b};
  return {std::abs(a), a};
}

double flux_1d(double qL, double qR, double lL, double lR, double q_mid, FluxVariant variant) {
  const SignedMax m = signed_max(lL, lR);
  double f = 0.5 * (lL * qL + lR * qR) - 0.5 * m.alpha * (qR - qL);
  if (variant == FluxVariant::density_upwind) f -= 0.5 * sign_of(m.breve) * q_mid * (lR - lL);
  return f;
}

std::pair<double, double> cell_extrapolation(double left, double mid, double right,
                                             SlopeMode mode) {
  switch (mode) {
    case SlopeMode::fixed:
      return {mid - 0.5 * (right - mid), mid + 0.5 * (mid - left)};
    case SlopeMode::eno: {
      const double sl = mid - left;
      const double sr = right - mid;
      const double s = std::abs(sr) < std::abs(sl) ? sr : sl;
      return {mid - 0.5 * s, mid + 0.5 * s};
    }
    case SlopeMode::zero:
      break;
  }
  return {mid, mid};
}

Extrapolated extrapolate_1d(std::span<const double, 5> q, SlopeMode mode) {
  Extrapolated e;
  e.jm1R = cell_extrapolation(q[0], q[1], q[2], mode).second;
  std::tie(e.jL, e.jR) = cell_extrapolation(q[1], q[2], q[3], mode);
  e.jp1L = cell_extrapolation(q[2], q[3], q[4], mode).first;
  return e;
}

double face_increment(std::span<const double, 4> q, std::span<const double, 4> lambda,
                      std::span<const double, 4> alpha, double s_face, double dt, double dx,
                      Terms terms) {
  double inc = -dt / (2.0 * dx) * (lambda[2] * q[2] - lambda[1] * q[1]);
  if (terms == Terms::adr) {
    inc += dt / (2.0 * dx * dx) * (alpha[2] * (q[3] - q[2]) - alpha[1] * (q[1] - q[0]));
    inc += 0.5 * dt * s_face;
  }
  return inc;
}

Extrapolated evolve_q_1d(const Extrapolated& ext, std::span<const double, 5> q,
                         std::span<const double, 5> lambda, std::span<const double, 5> alpha,
                         double s_minus, double s_plus, double dt, double dx, Terms terms) {
  const double minus = face_increment(q.first<4>(), lambda.first<4>(), alpha.first<4>(), s_minus,
                                      dt, dx, terms);
  const double plus = face_increment(q.last<4>(), lambda.last<4>(), alpha.last<4>(), s_plus, dt,
                                     dx, terms);
  return {ext.jm1R + minus, ext.jL + minus, ext.jR + plus, ext.jp1L + plus};
}

Extrapolated evolve_lambda_1d(std::span<const double, 5> lambda, double dlambda_minus,
                              double dlambda_plus, double dt) {
  const Extrapolated e = extrapolate_1d(lambda, SlopeMode::fixed);
  const double minus = 0.5 * dt * dlambda_minus;
  const double plus = 0.5 * dt * dlambda_plus;
  return {e.jm1R + minus, e.jL + minus, e.jR + plus, e.jp1L + plus};
}

std::vector<double> cell_averages(const Grid1D& grid, const std::function<double(double)>& f,
                                  int first, int count) {
  // Three-point Gauss-Legendre.
  static const double r = std::sqrt(3.0 / 5.0);
  const std::array<double, 3> xi{-r, 0.0, r};
  const std::array<double, 3> w{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  const double h = grid.dx();
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) {
    const double c = grid.center(first + k);
    double s = 0.0;
    for (int g = 0; g < 3; ++g) s += w[g] * f(c + 0.5 * h * xi[g]);
    out[k] = s;
  }
  return out;
}

namespace {

constexpr int kGhost = 2;

double eval_or_zero(const std::function<double(double, double)>& f, double x, double t) {
  return f ? f(x, t) : 0.0;
}

double source_or_zero(const Coeffs1D& c, double x, double t, double q) {
  return c.source ? c.source(x, t, q) : 0.0;
}

}  // namespace

State1D step_1d(const Grid1D& grid, const State1D& state, const Coeffs1D& coeffs, double dt,
                Scheme scheme, const Options& opt,
                const std::function<double(double, double)>& exact, StepFluxes* fluxes) {
  const int m = grid.cells;
  if (static_cast<int>(state.q.size()) != m) throw std::invalid_argument("step_1d: state size");
  if (!(dt >= 0.0)) throw std::invalid_argument("step_1d: negative time step");
  const double h = grid.dx();
  const double t = state.t;

  // Extended arrays: index k + kGhost holds cell k, k = -2 .. m+1.
  const int ne = m + 2 * kGhost;
  std::vector<double> q(ne), lam(ne), alp(ne, 0.0);
  std::copy(state.q.begin(), state.q.end(), q.begin() + kGhost);
  if (opt.boundary == Boundary::periodic) {
    for (int g = 0; g < kGhost; ++g) {
      q[g] = state.q[m - kGhost + g];
      q[m + kGhost + g] = state.q[g];
    }
  } else {
    if (!exact) throw std::invalid_argument("step_1d: Dirichlet boundary needs exact data");
    auto f = [&](double x) { return exact(x, t); };
    const auto lo = cell_averages(grid, f, -kGhost, kGhost);
    const auto hi = cell_averages(grid, f, m, kGhost);
    for (int g = 0; g < kGhost; ++g) {
      q[g] = lo[g];
      q[m + kGhost + g] = hi[g];
    }
  }
  auto xc = [&](int e) { return grid.center(e - kGhost); };
  for (int e = 0; e < ne; ++e) {
    lam[e] = coeffs.lambda(xc(e), t);
    if (coeffs.has_diffusion()) alp[e] = coeffs.alpha(xc(e), t);
  }

  const int nfaces = m + 1;
  std::vector<double> adv(nfaces), dif(nfaces, 0.0);
  std::vector<double> qbl(nfaces), qbr(nfaces);  // evolved values left/right of each face
  const FluxVariant variant =
      opt.density_visc ? FluxVariant::density_upwind : FluxVariant::classic;
  const bool lader = scheme == Scheme::lader;

  // Half-step evolved cell values used by the diffusion flux (cells -1 .. m).
  std::vector<double> qe(ne, 0.0);
  if (coeffs.has_diffusion()) {
    for (int e = 1; e < ne - 1; ++e) {
      qe[e] = q[e];
      if (lader && opt.evolve) {
        const double x = xc(e);
        const double ap = coeffs.alpha(x + 0.5 * h, t);
        const double am = coeffs.alpha(x - 0.5 * h, t);
        qe[e] += dt / (2.0 * h * h) * (ap * (q[e + 1] - q[e]) - am * (q[e] - q[e - 1]));
        qe[e] += 0.5 * dt * source_or_zero(coeffs, x, t, q[e]);
      }
    }
  }

#pragma omp parallel for schedule(static) if (opt.parallel)
  for (int f = 0; f < nfaces; ++f) {
    const int l = f - 1 + kGhost;  // extended index of the cell left of the face
    const int r = l + 1;
    const double xf = grid.face(f);
    if (!lader) {
      qbl[f] = q[l];
      qbr[f] = q[r];
      adv[f] = flux_1d(q[l], q[r], lam[l], lam[r], 0.5 * (q[l] + q[r]), variant);
    } else {
      const double ql = cell_extrapolation(q[l - 1], q[l], q[r], opt.slopes).second;
      const double qr = cell_extrapolation(q[l], q[r], q[r + 1], opt.slopes).first;
      double inc = 0.0;
      if (opt.evolve) {
        const double s_face = source_or_zero(coeffs, xf, t, 0.5 * (q[l] + q[r]));
        inc = face_increment(std::span<const double, 4>(q.data() + l - 1, 4),
                             std::span<const double, 4>(lam.data() + l - 1, 4),
                             std::span<const double, 4>(alp.data() + l - 1, 4), s_face, dt, h,
                             opt.terms);
      }
      qbl[f] = ql + inc;
      qbr[f] = qr + inc;
      double ll = lam[l];
      double lr = lam[r];
      if (opt.lambda_lader) {
        const double dl = 0.5 * dt * eval_or_zero(coeffs.dlambda_dt, xf, t);
        ll = cell_extrapolation(lam[l - 1], lam[l], lam[r], SlopeMode::fixed).second + dl;
        lr = cell_extrapolation(lam[l], lam[r], lam[r + 1], SlopeMode::fixed).first + dl;
      }
      adv[f] = flux_1d(qbl[f], qbr[f], ll, lr, 0.5 * (qbl[f] + qbr[f]), variant);
    }
    if (coeffs.has_diffusion()) {
      double a = coeffs.alpha(xf, t);
      if (lader) a += 0.5 * dt * eval_or_zero(coeffs.dalpha_dt, xf, t);
      dif[f] = a * (qe[r] - qe[l]);
    }
  }

  State1D out;
  out.t = t + dt;
  out.q.resize(m);
  std::vector<double> src(m, 0.0);
  for (int j = 0; j < m; ++j) {
    const double x = grid.center(j);
    if (coeffs.source) {
      src[j] = lader ? dt * coeffs.source(x, t + 0.5 * dt, 0.5 * (qbr[j] + qbl[j + 1]))
                     : dt * coeffs.source(x, t, state.q[j]);
    }
    out.q[j] = state.q[j] - dt / h * (adv[j + 1] - adv[j]) +
               dt / (h * h) * (dif[j + 1] - dif[j]) + src[j];
  }
  for (int j = 0; j < m; ++j) {
    if (!std::isfinite(out.q[j])) {
      throw DivergenceError("step_1d: non-finite value in cell " + std::to_string(j));
    }
  }
  if (fluxes) {
    fluxes->advective = std::move(adv);
    fluxes->diffusive = std::move(dif);
    fluxes->source = std::move(src);
  }
  return out;
}

double stable_dt(const Grid1D& grid, const Coeffs1D& coeffs, double t, double c, double c_m) {
  double lmax = 0.0;
  double amax = 0.0;
  for (int j = 0; j < grid.cells; ++j) {
    const double x = grid.center(j);
    lmax = std::max(lmax, std::abs(coeffs.lambda(x, t)));
    if (coeffs.has_diffusion()) amax = std::max(amax, std::abs(coeffs.alpha(x, t)));
  }
  const double h = grid.dx();
  double dt = std::numeric_limits<double>::infinity();
  if (lmax > 0.0) dt = c * h / lmax;
  if (amax > 0.0) dt = std::min(dt, c_m * h * h / (2.0 * amax));
  if (!std::isfinite(dt)) dt = c * h;
  return dt;
}

Case1D make_case_1d(const std::string& name, bool printed_source) {
  Case1D c;
  c.name = name;
  auto exact = [](double x, double t) { return std::exp(-2.0 * (x - t) * (x - t) - t); };
  c.exact = exact;
  if (name == "A1") {
    c.coeffs.lambda = [](double x, double) { return x + 2.0; };
    c.coeffs.dlambda_dt = [](double, double) { return 0.0; };
    const double sgn = printed_source ? 1.0 : -1.0;
    c.coeffs.source = [exact, sgn](double x, double t, double) {
      return 4.0 * (x - t) * (-1.0 + sgn * x) * exact(x, t);
    };
  } else if (name == "A2" || name == "A3") {
    c.coeffs.lambda = [](double x, double t) { return x + t * t + 2.0; };
    c.coeffs.dlambda_dt = [](double, double t) { return 2.0 * t; };
    if (name == "A2") {
      c.coeffs.source = [exact](double x, double t, double) {
        return 4.0 * (x - t) * (-1.0 - x - t * t) * exact(x, t);
      };
    } else {
      // The diffusion term sits on the left-hand side with a plus sign, so the
      // right-hand-side coefficient is its negative.
      auto phys = [](double x, double t) { return 1e-5 * std::exp(x * (t - 1.0) * (t - 1.0)); };
      c.coeffs.alpha = [phys](double x, double t) { return -phys(x, t); };
      c.coeffs.dalpha_dt = [phys](double x, double t) {
        return -2.0 * x * (t - 1.0) * phys(x, t);
      };
      c.coeffs.source = [exact, phys](double x, double t, double) {
        const double q = exact(x, t);
        const double d = (t - 1.0) * (t - 1.0);
        return -q + 4.0 * q * (x - t) * (-1.0 - x - t * t) + q +
               d * phys(x, t) * (-4.0 * (x - t) * q) +
               phys(x, t) * (-4.0 + 16.0 * (x - t) * (x - t)) * q;
      };
    }
  } else {
    throw std::invalid_argument("unknown 1D case: " + name);
  }
  return c;
}

Errors1D errors_1d(const Grid1D& grid, const State1D& state,
                   const std::function<double(double, double)>& exact) {
  const auto ref = cell_averages(grid, [&](double x) { return exact(x, state.t); }, 0, grid.cells);
  Errors1D e;
  const double h = grid.dx();
  for (int j = 0; j < grid.cells; ++j) {
    const double d = std::abs(state.q[j] - ref[j]);
    e.l1 += h * d;
    e.l2 += h * d * d;
    e.linf = std::max(e.linf, d);
  }
  e.l2 = std::sqrt(e.l2);
  return e;
}

RunResult1D run_1d(const Case1D& c, int cells, Scheme scheme, const Options& options,
                   double t_end) {
  if (cells < 1) throw std::invalid_argument("run_1d: cells must be positive");
  if (t_end < 0.0) t_end = c.t_end;
  const Grid1D grid{c.a, c.b, cells};
  RunResult1D r;
  r.state.t = 0.0;
  r.state.q = cell_averages(grid, [&](double x) { return c.exact(x, 0.0); }, 0, cells);
  while (r.state.t < t_end) {
    double dt = stable_dt(grid, c.coeffs, r.state.t);
    const bool last = r.state.t + dt >= t_end * (1.0 - 1e-14);
    if (last) dt = t_end - r.state.t;
    r.state = step_1d(grid, r.state, c.coeffs, dt, scheme, options, c.exact);
    if (last) r.state.t = t_end;
    ++r.steps;
  }
  r.errors = errors_1d(grid, r.state, c.exact);

  double qmax = 0.0;
  for (double v : r.state.q) qmax = std::max(qmax, std::abs(v));
  double emax = 0.0;
  constexpr int samples = 20000;
  for (int k = 0; k <= samples; ++k) {
    const double x = c.a + (c.b - c.a) * k / samples;
    emax = std::max(emax, std::abs(c.exact(x, t_end)));
  }
  r.overshoot = qmax - emax;
  return r;
}

Table1D run_convergence_1d(const Case1D& c, Scheme scheme, const Options& options,
                           const std::vector<int>& levels, double t_end) {
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (levels[k] <= levels[k - 1]) {
      throw std::invalid_argument("run_convergence_1d: levels must be strictly increasing");
    }
  }
  Table1D table;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const RunResult1D r = run_1d(c, levels[k], scheme, options, t_end);
    Row1D row;
    row.cells = levels[k];
    row.err = r.errors;
    row.overshoot = r.overshoot;
    row.steps = r.steps;
    row.order = {nan, nan, nan};
    if (k > 0) {
      const auto& p = table.rows.back();
      const double ratio = std::log(static_cast<double>(levels[k]) / levels[k - 1]);
      row.order.l1 = std::log(p.err.l1 / row.err.l1) / ratio;
      row.order.l2 = std::log(p.err.l2 / row.err.l2) / ratio;
      row.order.linf = std::log(p.err.linf / row.err.linf) / ratio;
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace lmn::adr1d
