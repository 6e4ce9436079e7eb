#pragma once

#include <vector>

#include "abho/model.hpp"

namespace abho {

// E = alpha w (2n + |m - b/alpha| + 1)
double eigenvalue(int n, int m, const Config& cfg);

// Normalized so that the integral of R^2 r dr over [0, inf) is 1.
double radial_eigenfunction(int n, int m, double r, const Config& cfg);
// R_0..R_nmax at one radius via the Laguerre recurrence.
std::vector<double> radial_eigenfunctions(int n_max, int m, double r, const Config& cfg);

// e^{i m theta} R_n(r) / sqrt(2 pi)
cplx eigenfunction(int n, int m, double r, double theta, const Config& cfg);

struct SpectralTruncation {
  int n_max = 60;
  int m_abs_max = 60;
  double tolerance = 1e-8;
};

struct SpectralValue {
  cplx value;
  double tail_estimate = 0.0;
};

// Angular channel m of the exact kernel, U = sum_m e^{i m (theta_x - theta_y)} K_m(r, r') / (2 pi);
// the radial sum over n is done in closed form.
cplx channel_kernel(double t, int m, double r, double rp, const Config& cfg);

// Channel sum over |m| <= m_abs_max; tail_estimate bounds the dropped channels relative to the
// kernel scale w/(2 pi alpha |sin wt|).
SpectralValue exact_propagator(double t, Vec2 x, Vec2 y, const Config& cfg, const SpectralTruncation& trunc = {});

// Direct sum over n <= n_max, |m| <= m_abs_max of e^{-i E (t - i tau)/alpha} psi(x) conj(psi(y)).
// At real time (tau = 0) the n-series converges only conditionally; tau > 0 damps it.
SpectralValue eigen_sum_propagator(double t, Vec2 x, Vec2 y, const Config& cfg,
                                   const SpectralTruncation& trunc, double tau = 0.0);

}  // namespace abho
