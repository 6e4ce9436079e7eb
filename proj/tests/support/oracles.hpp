#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "abho/abho.hpp"

namespace abho::testing {

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Vec2 in_annulus(double r_lo, double r_hi) {
    const double r = uniform(r_lo, r_hi);
    const double th = uniform(-std::numbers::pi, std::numbers::pi);
    return {r * std::cos(th), r * std::sin(th)};
  }

  Vec2 in_box(double half) { return {uniform(-half, half), uniform(-half, half)}; }

  // |y| in [0.5, 2], |eta| <= 2, |y^eta - b| > min_L
  PhasePoint phase_point(const Config& cfg, double min_L) {
    for (;;) {
      PhasePoint p{in_annulus(0.5, 2.0), in_box(1.5)};
      if (std::abs(wedge(p.y, p.eta) - cfg.flux_b) > min_L) return p;
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Central difference of a vector-valued map along one coordinate of (y, eta).
template <class F>
auto central_diff(F&& f, const PhasePoint& p, int coord, double h) {
  auto shifted = [&](double d) {
    PhasePoint q = p;
    double* c[4] = {&q.y.x1, &q.y.x2, &q.eta.x1, &q.eta.x2};
    *c[coord] += d;
    return f(q);
  };
  return (shifted(h) - shifted(-h)) / (2.0 * h);
}

// Integral of f over [0, upper] by double-exponential quadrature on `pieces` equal panels.
inline double radial_integral(const std::function<double(double)>& f, double upper, int pieces = 32) {
  boost::math::quadrature::tanh_sinh<double> ts;
  double acc = 0.0;
  for (int i = 0; i < pieces; ++i) acc += ts.integrate(f, upper * i / pieces, upper * (i + 1) / pieces, 1e-13);
  return acc;
}

// Smooth radial profile supported away from the origin.
inline double ring_profile(double r, double center, double width) {
  const double z = (r - center) / width;
  return std::exp(-0.5 * z * z);
}

// Trapezoid sum of f on [a, b] with n intervals; complex-valued.
template <class F>
cplx trapezoid(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  cplx acc = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) acc += f(a + i * h);
  return acc * h;
}

// H psi - E psi by fourth-order differences in (r, theta) of the polar form
// H = -a^2/2 (d_rr + d_r/r) + (-i a d_theta - b)^2/(2 r^2) + w^2 r^2/2.
inline double polar_residual(int n, int m, const Config& cfg) {
  const double a = cfg.alpha, b = cfg.flux_b, w = cfg.omega;
  const double ht = 1e-3;
  auto psi = [&](double r, double th) { return eigenfunction(n, m, r, th, cfg); };
  auto d1 = [](cplx fm2, cplx fm1, cplx fp1, cplx fp2, double h) { return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12 * h); };
  auto d2 = [](cplx fm2, cplx fm1, cplx f0, cplx fp1, cplx fp2, double h) {
    return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12 * h * h);
  };
  const double E = eigenvalue(n, m, cfg);
  double worst = 0.0, scale = 0.0;
  const double r_hi = 2.5 * std::sqrt((2.0 * n + std::abs(m) + 3.0) * a / w);
  for (int i = 1; i <= 60; ++i) {
    const double r = r_hi * i / 60.0;
    const double hr = std::min(1e-3, 0.01 * r);
    for (const double th : {0.3, 1.9, -2.4}) {
      const cplx f0 = psi(r, th);
      const cplx rm2 = psi(r - 2 * hr, th), rm1 = psi(r - hr, th), rp1 = psi(r + hr, th), rp2 = psi(r + 2 * hr, th);
      const cplx tm2 = psi(r, th - 2 * ht), tm1 = psi(r, th - ht), tp1 = psi(r, th + ht), tp2 = psi(r, th + 2 * ht);
      const cplx radial = d2(rm2, rm1, f0, rp1, rp2, hr) + d1(rm2, rm1, rp1, rp2, hr) / r;
      const cplx ang = -a * a * d2(tm2, tm1, f0, tp1, tp2, ht) + cplx(0, 2 * a * b) * d1(tm2, tm1, tp1, tp2, ht) + b * b * f0;
      const cplx h_psi = -0.5 * a * a * radial + ang / (2 * r * r) + 0.5 * w * w * r * r * f0;
      worst = std::max(worst, std::abs(h_psi - E * f0));
      scale = std::max(scale, std::abs(E * f0));
    }
  }
  return worst / scale;
}

// Sign-change scan of det x^s_y from the flow Jacobian on a uniform grid. At b = 0 the
// determinant is cos^2 and only touches zero, so the sign of cos(ws) I = x^s_y is scanned and
// each crossing counts twice.
inline int morse_scan(double t, const PhasePoint& p, const Config& cfg, int n = 10000) {
  auto probe = [&](double s) {
    const ComplexMat2 j = flow_jacobians(s, p, cfg).x_y;
    return cfg.flux_b == 0.0 ? j(0, 0).real() : j.det().real();
  };
  int m = 0;
  double prev = probe(0.0);
  for (int i = 1; i <= n; ++i) {
    const double cur = probe(t * i / n);
    if (prev * cur < 0.0) m += cfg.flux_b == 0.0 ? 2 : 1;
    prev = cur;
  }
  return m;
}

}  // namespace abho::testing
