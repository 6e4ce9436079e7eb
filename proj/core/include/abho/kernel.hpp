#pragma once

#include <optional>
#include <span>
#include <vector>

#include "abho/model.hpp"

namespace abho {

// theta_eps: 0 for |x| < eps, 1 for |x| > 2 eps, exp(-1/s) mollifier ramp in between.
double cutoff(Vec2 x, double eps);

// theta_eps(x^t) theta_eps(y) sqrt(det Z) on the continuous branch.
cplx symbol_u0(double t, const PhasePoint& p, const Config& cfg);

struct QuadratureSpec {
  double tail_tol = 1e-10;
  int osc_points_per_period = 8;
  int max_points_per_axis = 2048;
  double refine_ratio_tol = 1e-6;
};

QuadratureSpec validate_quadrature(const QuadratureSpec& q);

struct KernelSample {
  cplx value;
  double est_error = 0.0;
  Vec2 eta_center;
  double radius = 0.0;
  long n_points = 0;
};

// (2 pi alpha)^-2 * integral of exp(i phi/alpha) u0 over eta, trapezoid rule on a square
// around eta* with one halving for the error estimate.
KernelSample kernel_u0(double t, Vec2 x, Vec2 y, const Config& cfg, const QuadratureSpec& q = {});

struct GridSpec {
  double x0 = 0.0;
  double x1 = 0.0;
  int nx = 1;
  double y0 = 0.0;
  double y1 = 0.0;
  int ny = 1;
};

// Row-major: outer index over the first coordinate, inner over the second.
std::vector<Vec2> make_grid(const GridSpec& g);

struct KernelRow {
  Vec2 x;
  std::optional<KernelSample> sample;
  std::optional<Error> error;
};

// threads == 0 uses the hardware concurrency; output order follows xs.
std::vector<KernelRow> kernel_grid(double t, std::span<const Vec2> xs, Vec2 y, const Config& cfg,
                                   const QuadratureSpec& q = {}, unsigned threads = 0);

struct ResidualValue {
  cplx residual;  // (i alpha d/dt - H) U0
  cplx kernel;    // U0(t, x, y)
  double relative = 0.0;
};

// All stencil points share one eta node set so the finite differences see a single smooth sum.
ResidualValue pde_residual(double t, Vec2 x, Vec2 y, const Config& cfg, const QuadratureSpec& q,
                           double fd_step_t, double fd_step_x);

}  // namespace abho
