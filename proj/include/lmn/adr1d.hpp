#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lmn/types.hpp"

namespace lmn::adr1d {

/// Uniform grid on [a, b]; cell j (0-based) is centered at a + (j + 1/2) dx.
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  int cells = 1;

  double dx() const { return (b - a) / cells; }
  double center(int j) const { return a + (j + 0.5) * dx(); }
  double face(int j) const { return a + j * dx(); }  // left face of cell j
};

struct State1D {
  std::vector<double> q;
  double t = 0.0;
};

/// Coefficients of  q_t + (lambda q)_x = (alpha q_x)_x + s(x, t, q).
struct Coeffs1D {
  std::function<double(double, double)> lambda;
  std::function<double(double, double)> dlambda_dt;
  std::function<double(double, double)> alpha;      // may be empty: no diffusion
  std::function<double(double, double)> dalpha_dt;  // may be empty
  std::function<double(double, double, double)> source;  // may be empty

  bool has_diffusion() const { return static_cast<bool>(alpha); }
};

enum class FluxVariant { classic, density_upwind };

struct SignedMax {
  double alpha;  // max(|a|, |b|)
  double breve;  // the signed value attaining it; ties go to a
};

SignedMax signed_max(double a, double b);

double flux_1d(double qL, double qR, double lL, double lR, double q_mid, FluxVariant variant);

enum class SlopeMode { fixed, eno, zero };

/// Boundary-extrapolated values around cell j: the right value of cell j-1,
/// both values of cell j and the left value of cell j+1.
struct Extrapolated {
  double jm1R = 0.0;
  double jL = 0.0;
  double jR = 0.0;
  double jp1L = 0.0;
};

/// One-sided values of a single cell, given its two neighbours.
std::pair<double, double> cell_extrapolation(double left, double mid, double right, SlopeMode mode);

/// `q` holds cells j-2 .. j+2.
Extrapolated extrapolate_1d(std::span<const double, 5> q, SlopeMode mode);

enum class Terms { advection_only, adr };

/// Half-step increment shared by both sides of face j+1/2, given cells
/// j-1 .. j+2 and the source sampled at the face.
double face_increment(std::span<const double, 4> q, std::span<const double, 4> lambda,
                      std::span<const double, 4> alpha, double s_face, double dt, double dx,
                      Terms terms);

/// Evolves the extrapolated values of cell j by dt/2. `q`, `lambda`, `alpha`
/// hold cells j-2 .. j+2; `s_minus`/`s_plus` are the sources at faces j-1/2 and
/// j+1/2 (ignored for advection_only).
Extrapolated evolve_q_1d(const Extrapolated& ext, std::span<const double, 5> q,
                         std::span<const double, 5> lambda, std::span<const double, 5> alpha,
                         double s_minus, double s_plus, double dt, double dx, Terms terms);

/// Fixed-slope extrapolation of lambda around cell j plus the half-step time
/// increment, with the time derivatives sampled at faces j-1/2 and j+1/2.
Extrapolated evolve_lambda_1d(std::span<const double, 5> lambda, double dlambda_minus,
                              double dlambda_plus, double dt);

enum class Scheme { order1, lader };
enum class Boundary { dirichlet, periodic };

struct Options {
  bool density_visc = true;
  bool lambda_lader = true;
  SlopeMode slopes = SlopeMode::fixed;
  bool evolve = true;
  Terms terms = Terms::adr;
  Boundary boundary = Boundary::dirichlet;
  bool parallel = false;
};

/// Exact cell averages on cells [first, first + count), ghost indices allowed.
std::vector<double> cell_averages(const Grid1D& grid, const std::function<double(double)>& f,
                                  int first, int count);

/// Face fluxes of one step: face f sits at grid.face(f), f = 0 .. cells.
struct StepFluxes {
  std::vector<double> advective;
  std::vector<double> diffusive;
  std::vector<double> source;  // per cell, already integrated over the step
};

/// One conservative update. `exact` (x, t) supplies Dirichlet ghost averages.
State1D step_1d(const Grid1D& grid, const State1D& state, const Coeffs1D& coeffs, double dt,
                Scheme scheme, const Options& options,
                const std::function<double(double, double)>& exact = {},
                StepFluxes* fluxes = nullptr);

double stable_dt(const Grid1D& grid, const Coeffs1D& coeffs, double t, double c = 0.5,
                 double c_m = 0.5);

struct Case1D {
  std::string name;
  double a = 0.0;
  double b = 2.0;
  double t_end = 1.0;
  Coeffs1D coeffs;
  std::function<double(double, double)> exact;
};

/// A1, A2 or A3. With `printed_source` the source is taken exactly as
/// typeset in the original tables rather than re-derived.
Case1D make_case_1d(const std::string& name, bool printed_source = false);

struct Errors1D {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

Errors1D errors_1d(const Grid1D& grid, const State1D& state,
                   const std::function<double(double, double)>& exact);

struct RunResult1D {
  State1D state;
  Errors1D errors;
  int steps = 0;
  double overshoot = 0.0;  // max|q| minus the exact maximum at t_end
};

RunResult1D run_1d(const Case1D& c, int cells, Scheme scheme, const Options& options,
                   double t_end = -1.0);

struct Row1D {
  int cells = 0;
  Errors1D err;
  Errors1D order;  // NaN on the first row
  double overshoot = 0.0;
  int steps = 0;
};

struct Table1D {
  std::vector<Row1D> rows;
};

Table1D run_convergence_1d(const Case1D& c, Scheme scheme, const Options& options,
                           const std::vector<int>& levels, double t_end = -1.0);

/// True when the solution overshoots the exact maximum by more than `margin`.
inline bool oscillates(const RunResult1D& r, double margin = 1e-3) { return r.overshoot > margin; }

}  // namespace lmn::adr1d
