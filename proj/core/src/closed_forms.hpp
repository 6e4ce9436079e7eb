#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "abho/model.hpp"
#include "time_angle.hpp"

namespace abho::detail {

inline double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Continuous lift of Arg x^t - Arg y; L = y^eta - b.
inline double lift_closed(const TimeAngle& a, Vec2 y, Vec2 eta, double L, double omega) {
  return a.k * std::numbers::pi * sign_of(L) +
         std::atan2(a.rs * L / omega, dot(y, y) * a.rc + a.rs * dot(y, eta) / omega);
}

// v = eta - A(y)
inline double action_closed(const TimeAngle& a, Vec2 y, Vec2 eta, Vec2 v, double lift,
                            const Config& cfg) {
  const double w = cfg.omega;
  return -a.s * a.s * dot(y, eta) + (a.s * a.c / (2.0 * w)) * (dot(v, v) - w * w * dot(y, y)) +
         cfg.flux_b * lift;
}

struct SqrtDetZ {
  cplx det_z;
  cplx sqrt_det_z;
  double arg_lift = 0.0;
};

// Each eigenvalue c - iBs/w +- b s/(w|x|^2) keeps Im = -B s/w, so it only crosses the real
// axis at s = k pi/w where it equals (-1)^k; its continuous arg is -k pi + Arg((-1)^k mu).
inline SqrtDetZ sqrt_det_z_closed(const TimeAngle& a, double x_norm2, const Config& cfg) {
  const double w = cfg.omega;
  const double kappa = cfg.flux_b / (w * x_norm2);
  const cplx base(a.rc, -cfg.damping_B * a.rs / w);
  const cplx mu_p = base + kappa * a.rs;
  const cplx mu_m = base - kappa * a.rs;
  const double shift = -2.0 * a.k * std::numbers::pi;
  SqrtDetZ out;
  out.arg_lift = shift + std::arg(mu_p) + std::arg(mu_m);
  const double modulus = std::sqrt(std::abs(mu_p) * std::abs(mu_m));
  out.sqrt_det_z = std::polar(modulus, 0.5 * out.arg_lift);
  // (-1)^k factors cancel in the product
  out.det_z = mu_p * mu_m;
  return out;
}

}  // namespace abho::detail
