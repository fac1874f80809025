#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lmn/adr1d.hpp"
#include "lmn/harness.hpp"
#include "lmn/mesh.hpp"
#include "lmn/projection.hpp"
#include "lmn/source_check.hpp"
#include "lmn/transport.hpp"

using namespace lmn;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (ok ? "" : "[x] ") << what << "; ";
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

bool in(double v, double lo, double hi) { return v >= lo && v <= hi; }

const std::vector<int> kCells{8, 16, 32, 64, 128, 256, 512};

adr1d::Options eno_options() {
  adr1d::Options o;
  o.slopes = adr1d::SlopeMode::eno;
  return o;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = adr1d::make_case_1d("A1");
  const auto t = adr1d::run_convergence_1d(c, adr1d::Scheme::order1, adr1d::Options{}, kCells);
  const double wall = seconds_since(t0);
  const std::vector<double> reference{8.87e-2, 5.36e-2, 2.95e-2, 1.55e-2, 7.98e-3, 4.04e-3, 2.03e-3};
  bool monotone = true;
  std::string orders;
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    orders += num(t.rows[k].order.l1, 4) + (k + 1 < t.rows.size() ? "," : "");
    if (k >= 2 && std::abs(t.rows[k].order.l1 - 1.0) > std::abs(t.rows[k - 1].order.l1 - 1.0)) {
      monotone = false;
    }
  }
  o.require(monotone, "orders approach 1 monotonically (" + orders + ")");
  const double last = t.rows.back().order.l1;
  o.require(in(last, 0.95, 1.03), "order 256->512 " + num(last, 4) + " in [0.95, 1.03]");
  double worst = 0.0;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const double r = t.rows[k].err.l1 / reference[k];
    worst = std::max(worst, std::max(r, 1.0 / r));
  }
  o.require(worst <= 2.0, "largest error ratio to the reference column " + num(worst) + " <= 2");
  o.require(wall < 5.0, "runtime " + num(wall) + " s < 5 s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = adr1d::make_case_1d("A1");
  const auto t = adr1d::run_convergence_1d(c, adr1d::Scheme::lader, eno_options(), kCells);
  const double wall = seconds_since(t0);
  const auto& r = t.rows.back();
  o.require(in(r.order.l1, 1.9, 2.1), "L1 order 256->512 " + num(r.order.l1, 4) + " in [1.9, 2.1]");
  o.require(in(r.err.l1, 1.0e-5, 4.0e-5), "L1 error at 512 " + num(r.err.l1) + " in [1e-5, 4e-5]");
  o.require(wall < 10.0, "runtime " + num(wall) + " s < 10 s");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = adr1d::make_case_1d("A1");
  auto no_density = eno_options();
  no_density.density_visc = false;
  const auto a = adr1d::run_convergence_1d(c, adr1d::Scheme::lader, no_density, {256, 512});
  auto no_lambda = eno_options();
  no_lambda.lambda_lader = false;
  const auto b = adr1d::run_convergence_1d(c, adr1d::Scheme::lader, no_lambda, {256, 512});
  const double wall = seconds_since(t0);
  const auto& ra = a.rows.back();
  o.require(ra.order.linf < 0.5,
            "no density term: Linf order " + num(ra.order.linf, 4) + " < 0.5");
  o.require(ra.overshoot > 1e-3,
            "no density term: overshoot " + num(ra.overshoot) + " > 1e-3");
  const double ob = b.rows.back().order.l1;
  o.require(in(ob, 0.8, 1.05), "no lambda evolution: L1 order " + num(ob, 4) + " in [0.8, 1.05]");
  o.require(wall < 20.0, "runtime " + num(wall) + " s < 20 s");
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (const auto& [name, finest] : {std::pair{"A2", 512}, std::pair{"A3", 256}}) {
    const auto c = adr1d::make_case_1d(name);
    std::vector<int> cells;
    for (int n : kCells) {
      if (n <= finest) cells.push_back(n);
    }
    const auto l = adr1d::run_convergence_1d(c, adr1d::Scheme::lader, eno_options(), cells);
    const auto f = adr1d::run_convergence_1d(c, adr1d::Scheme::order1, adr1d::Options{}, cells);
    const double ol = l.rows.back().order.l1;
    const double of = f.rows.back().order.l1;
    o.require(in(ol, 1.1, 1.5), std::string(name) + " LADER+ENO L1 order " + num(ol, 4) +
                                    " in [1.1, 1.5]");
    o.require(in(of, 0.95, 1.03),
              std::string(name) + " first-order L1 order " + num(of, 4) + " in [0.95, 1.03]");
  }
  return o;
}

harness::ConvergenceTable run3d(const std::string& test, const std::string& variant,
                                const std::vector<int>& levels, bool exact_drho = false) {
  harness::RunConfig cfg;
  cfg.test = test;
  cfg.variant = variant;
  cfg.levels = levels;
  cfg.exact_drho_dt = exact_drho;
  return harness::run_case(cfg);
}

void print_table(const harness::ConvergenceTable& t) {
  std::ostringstream s;
  harness::write_csv(s, t);
  std::printf("%s", s.str().c_str());
  std::fflush(stdout);
}

Outcome criterion5() {
  Outcome o;
  struct Band {
    const char* variant;
    double lo, hi;
  };
  for (const Band b : {Band{"lader", 1.8, 2.1}, Band{"order1", 0.8, 1.0},
                       Band{"lader-no-rho-evol", 0.8, 1.0}}) {
    const auto t = run3d("test1_euler", b.variant, {4, 8, 16});
    print_table(t);
    if (!t.ok()) {
      o.require(false, std::string(b.variant) + " run aborted: " + t.rows.back().error);
      continue;
    }
    for (std::size_t k = 1; k < t.rows.size(); ++k) {
      o.require(in(t.rows[k].ord_wu, b.lo, b.hi),
                std::string(b.variant) + " w_u order M" + std::to_string(k) + "/M" +
                    std::to_string(k + 1) + " " + num(t.rows[k].ord_wu, 4) + " in [" +
                    num(b.lo) + ", " + num(b.hi) + "]");
    }
    const double coarse = t.rows[0].wall_seconds + t.rows[1].wall_seconds;
    o.require(coarse < 120.0, std::string(b.variant) + " M1+M2 " + num(coarse) + " s < 120 s");
    o.require(t.rows[2].wall_seconds < 1800.0,
              std::string(b.variant) + " M3 " + num(t.rows[2].wall_seconds) + " s < 1800 s");
  }
  return o;
}

Outcome criterion6(bool full) {
  Outcome o;
  const std::vector<int> levels = full ? std::vector<int>{4, 8, 16} : std::vector<int>{4, 8};
  const auto t = run3d("test2_ns", "lader", levels);
  const auto x = run3d("test2_ns", "lader", levels, true);
  print_table(t);
  print_table(x);
  if (!t.ok() || !x.ok()) {
    o.require(false, "a run aborted");
    return o;
  }
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    const std::string pair = "M" + std::to_string(k) + "/M" + std::to_string(k + 1);
    o.require(in(t.rows[k].ord_pi, 1.8, 2.2),
              "pi order " + pair + " " + num(t.rows[k].ord_pi, 4) + " in [1.8, 2.2]");
    o.require(in(t.rows[k].ord_wu, 1.8, 2.2),
              "w_u order " + pair + " " + num(t.rows[k].ord_wu, 4) + " in [1.8, 2.2]");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    worst = std::max(worst, std::abs(x.rows[k].err_pi - t.rows[k].err_pi) / t.rows[k].err_pi);
    worst = std::max(worst, std::abs(x.rows[k].err_wu - t.rows[k].err_wu) / t.rows[k].err_wu);
  }
  o.require(worst < 0.1, "exact d(rho)/dt changes errors by " + num(worst) + " < 0.1 relative");
  return o;
}

// Property suites.

double poisson_error(int n) {
  const auto d = mesh::build_dual_mesh(mesh::build_box_tet_mesh(n));
  auto exact = [](const Vec3& x) {
    using std::numbers::pi;
    return std::cos(pi * x.x()) * std::cos(pi * x.y()) * std::cos(pi * x.z());
  };
  std::vector<Vec3> zero(d.cells(), Vec3::Zero());
  std::vector<double> Q(d.cells());
  for (std::size_t i = 0; i < d.cells(); ++i) {
    Q[i] = 3.0 * std::numbers::pi * std::numbers::pi * exact(d.nodes[i]);
  }
  const auto sys = projection::assemble_pressure_system(d, zero, Q, zero, 1.0);
  const auto delta = projection::solve_mean_zero(sys, d, 1e-12);
  const auto w = projection::vertex_volumes(d);
  double mean = 0.0, total = 0.0;
  for (std::size_t v = 0; v < w.size(); ++v) {
    mean += w[v] * exact(d.mesh.vertices[v]);
    total += w[v];
  }
  mean /= total;
  double e = 0.0;
  for (std::size_t v = 0; v < w.size(); ++v) {
    const double diff = delta[v] - (exact(d.mesh.vertices[v]) - mean);
    e += w[v] * diff * diff;
  }
  return std::sqrt(e);
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0), r(0.3, 3.0);
  auto vec = [&] { return Vec3(u(rng), u(rng), u(rng)); };

  double flux_err = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Vec3 Wi = vec(), Wj = vec(), eta = vec();
    const double ri = r(rng), rj = r(rng);
    for (bool term : {false, true}) {
      const Vec3 same = transport::momentum_flux(Wi, Wi, ri, ri, eta, term);
      flux_err = std::max(flux_err, (same - transport::normal_flux(Wi, ri, eta)).norm() /
                                        (1.0 + same.norm()));
      const Vec3 f = transport::momentum_flux(Wi, Wj, ri, rj, eta, term);
      const Vec3 b = transport::momentum_flux(Wj, Wi, rj, ri, -eta, term);
      flux_err = std::max(flux_err, (f + b).norm() / (1.0 + f.norm()));
    }
  }
  o.require(flux_err <= 1e-12, "flux consistency/antisymmetry " + num(flux_err));

  const auto d1 = mesh::build_dual_mesh(mesh::build_box_tet_mesh(4));
  {
    std::vector<Vec3> W;
    std::vector<double> rho;
    for (std::size_t i = 0; i < d1.cells(); ++i) {
      W.push_back(vec());
      rho.push_back(r(rng));
    }
    const auto a = transport::advective_residual(d1, W, rho, transport::Approach::flux_term);
    const auto b = transport::advective_residual(d1, W, rho, transport::Approach::cellwise);
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      scale = std::max(scale, a[i].norm());
      diff = std::max(diff, (a[i] - b[i]).norm());
    }
    o.require(diff <= 1e-12 * scale, "assembly approaches agree to " + num(diff / scale));
  }

  {
    bool ok = true;
    for (int n : {1, 2, 4, 8}) {
      const auto d = mesh::build_dual_mesh(mesh::build_box_tet_mesh(n));
      double total = 0.0;
      for (double v : d.volume) total += v;
      ok = ok && std::abs(total - 1.0) < 1e-12;
      std::vector<double> sub(d.cells(), 0.0);
      std::vector<Vec3> closure(d.cells(), Vec3::Zero());
      for (const auto& f : d.interfaces) {
        ok = ok && std::abs(f.subvolume - f.distance * f.eta.norm() / 3.0) <= 1e-12 * f.subvolume;
        sub[f.cell_i] += f.subvolume;
        sub[f.cell_j] += f.subvolume;
        closure[f.cell_i] += f.eta;
        closure[f.cell_j] -= f.eta;
      }
      for (std::size_t i = 0; i < d.cells(); ++i) {
        ok = ok && std::abs(sub[i] - d.volume[i]) <= 1e-12 * d.volume[i];
        ok = ok && (closure[i] + d.boundary_eta[i]).norm() <= 1e-12 * d.surface[i];
      }
    }
    o.require(ok, "dual-mesh volume, sub-volume and closure identities");
  }

  {
    std::vector<double> f;
    for (const auto& x : d1.nodes) f.push_back(2.0 * x.x() + 3.0 * x.y() - x.z() + 5.0);
    double err = 0.0;
    for (int e = 0; e < static_cast<int>(d1.mesh.tets.size()); ++e) {
      err = std::max(err, (mesh::p1_gradient(d1, f, e) - Vec3(2.0, 3.0, -1.0)).norm());
    }
    o.require(err < 1e-12, "P1 gradient exactness " + num(err));
  }

  {
    const Vec3 g(0.7, -1.3, 2.1);
    std::vector<double> pi;
    for (const auto& v : d1.mesh.vertices) pi.push_back(0.4 + g.dot(v));
    double err = 0.0;
    for (int i = 0; i < static_cast<int>(d1.cells()); ++i) {
      Vec3 acc = Vec3::Zero();
      for (const auto& l : d1.links_of(i)) {
        acc += l.orientation * transport::pressure_face_integral(d1, pi, l.interface);
      }
      if (d1.boundary[i]) {
        const auto& v = d1.mesh.faces[i].vertices;
        acc += ((pi[v[0]] + pi[v[1]] + pi[v[2]]) / 3.0) * d1.boundary_eta[i];
      }
      err = std::max(err, (acc - d1.volume[i] * g).norm() / (d1.volume[i] * g.norm()));
    }
    o.require(err < 1e-11, "pressure quadrature on closed cells " + num(err));
  }

  {
    const double e4 = poisson_error(4), e8 = poisson_error(8), e16 = poisson_error(16);
    const double o2 = std::log2(e8 / e16);
    o.require(std::log2(e4 / e8) > 1.8 && in(o2, 1.9, 2.2),
              "Neumann Poisson L2 order " + num(o2, 4));
  }

  {
    std::vector<Vec3> W(d1.cells()), bW(d1.cells(), Vec3::Zero());
    std::vector<double> Q(d1.cells());
    for (std::size_t i = 0; i < d1.cells(); ++i) {
      W[i] = vec();
      Q[i] = u(rng);
      if (d1.boundary[i]) bW[i] = vec();
    }
    const double dt = 0.01, tol = 1e-12;
    const auto sys = projection::assemble_pressure_system(d1, W, Q, bW, dt);
    const auto delta = projection::solve_mean_zero(sys, d1, tol);
    const auto res = projection::weak_divergence_residual(d1, W, delta, Q, bW, dt);
    const double defect = sys.defect / static_cast<double>(res.size());
    const double norm = (res.array() - defect).matrix().norm() / sys.rhs.norm();
    o.require(norm <= 10.0 * tol, "weak-divergence residual " + num(norm));
  }

  {
    double worst = 0.0;
    for (const char* name : {"test1_euler", "test2_ns", "A1", "A2", "A3"}) {
      const auto rep = std::visit([](const auto& c) { return harness::validate_source_terms(c); },
                                  harness::manufactured_case(name));
      for (const auto& e : rep.equations) worst = std::max(worst, e.relative);
    }
    o.require(worst <= 1e-5, "source residual oracle " + num(worst));
  }

  {
    transport::FlowState s;
    for (const auto& x : d1.nodes) {
      s.rho.push_back(2.0 + 0.5 * std::sin(3.0 * x.x()) * std::cos(2.0 * x.y()));
      s.W.push_back(Vec3(1.0 + 0.3 * x.y(), 0.2 * std::sin(4.0 * x.z()), -0.4 + x.x() * x.y()));
    }
    for (const auto& v : d1.mesh.vertices) s.pi.push_back(std::cos(v.x() + 2.0 * v.y()) * v.z());
    transport::Problem p;
    p.mu = 0.02;
    const double dt = 1e-3;
    double worst = 0.0;
    for (auto scheme : {transport::Scheme::order1, transport::Scheme::lader}) {
      transport::Options opt;
      opt.impose_boundary = false;
      const auto W = transport::transport_step(d1, s, p, dt, scheme, opt);
      Vec3 change = Vec3::Zero(), boundary = Vec3::Zero();
      double scale = 0.0;
      for (std::size_t i = 0; i < d1.cells(); ++i) {
        change += d1.volume[i] * (W[i] - s.W[i]);
        scale += d1.volume[i] * s.W[i].norm();
        if (d1.boundary[i]) {
          const auto& v = d1.mesh.faces[i].vertices;
          boundary -= dt * ((s.pi[v[0]] + s.pi[v[1]] + s.pi[v[2]]) / 3.0) * d1.boundary_eta[i];
        }
      }
      worst = std::max(worst, (change - boundary).norm() / scale);
    }
    o.require(worst <= 1e-10, "conservation telescoping " + num(worst));
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (const char* test : {"test1_euler", "test2_ns"}) {
    for (const char* variant : {"order1", "lader"}) {
      harness::RunConfig cfg;
      cfg.test = test;
      cfg.variant = variant;
      cfg.levels = {4};
      cfg.t_end = 0.1;
      const auto a = harness::run_case(cfg);
      const auto b = harness::run_case(cfg);
      cfg.parallel = true;
      const auto p = harness::run_case(cfg);
      const std::string tag = std::string(test) + "/" + variant;
      if (!a.ok() || !b.ok() || !p.ok()) {
        o.require(false, tag + " run aborted");
        continue;
      }
      const auto &ra = a.rows[0], &rb = b.rows[0], &rp = p.rows[0];
      o.require(ra.err_pi == rb.err_pi && ra.err_wu == rb.err_wu, tag + " serial reruns bitwise");
      const double rel = std::max(std::abs(rp.err_pi - ra.err_pi) / ra.err_pi,
                                  std::abs(rp.err_wu - ra.err_wu) / ra.err_wu);
      o.require(rel <= 1e-13, tag + " parallel vs serial " + num(rel));
    }
  }
  const auto c = adr1d::make_case_1d("A1");
  auto opt = eno_options();
  const auto a = adr1d::run_convergence_1d(c, adr1d::Scheme::lader, opt, {64, 128});
  const auto b = adr1d::run_convergence_1d(c, adr1d::Scheme::lader, opt, {64, 128});
  opt.parallel = true;
  const auto p = adr1d::run_convergence_1d(c, adr1d::Scheme::lader, opt, {64, 128});
  bool bitwise = true;
  double rel = 0.0;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    bitwise = bitwise && a.rows[k].err.l1 == b.rows[k].err.l1 &&
              a.rows[k].err.linf == b.rows[k].err.linf;
    rel = std::max(rel, std::abs(p.rows[k].err.l1 - a.rows[k].err.l1) / a.rows[k].err.l1);
  }
  o.require(bitwise, "1D serial reruns bitwise");
  o.require(rel <= 1e-13, "1D parallel vs serial " + num(rel));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance report: one PASS/FAIL line per criterion"};
  std::vector<int> only;
  bool strict = false;
  bool full = false;
  app.add_option("--criteria", only, "criteria to run (default: all)")->delimiter(',');
  app.add_flag("--strict", strict, "exit nonzero when any criterion fails");
  app.add_flag("--full", full, "also run the finest Test 2 mesh for criterion 6");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3,
      criterion4, criterion5, [full] { return criterion6(full); },
      criterion7, criterion8};
  std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  std::vector<std::string> lines;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::string line;
    try {
      const Outcome o = criteria[k]();
      line = "criterion " + std::to_string(id) + ": " + (o.pass ? "PASS" : "FAIL") + " (" +
             num(seconds_since(t0)) + " s) " + o.detail.str();
      if (!o.pass) ++failed;
    } catch (const std::exception& e) {
      line = "criterion " + std::to_string(id) + ": FAIL error: " + e.what();
      ++failed;
    }
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    lines.push_back(line);
  }
  std::printf("\nsummary\n");
  for (const auto& l : lines) std::printf("%s\n", l.substr(0, l.find(" (")).c_str());
  std::printf("%d of %zu criteria failed\n", failed, lines.size());
  return strict && failed > 0 ? 1 : 0;
}
