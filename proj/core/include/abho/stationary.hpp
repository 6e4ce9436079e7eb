#pragma once

#include <utility>
#include <vector>

#include "abho/kernel.hpp"
#include "abho/model.hpp"

namespace abho {

struct StationaryEta {
  Vec2 eta_star;
  double s_at_star = 0.0;
  int winding_l = 0;
};

// eta* = A(y) + w (x - cos(wt) y)/sin(wt); S(t, y, eta*) is computed from action() and from the
// Mehler-type closed form and the two must agree to 1e-9.
StationaryEta stationary_eta(double t, Vec2 x, Vec2 y, const Config& cfg);

// w/(2 pi i alpha sin wt) exp(i w (cos wt (|x|^2+|y|^2) - 2 x.y)/(2 alpha sin wt)); ignores flux_b.
cplx mehler_kernel(double t, Vec2 x, Vec2 y, const Config& cfg);

// w exp(i S(t, y, eta*)/alpha)/(2 pi i alpha sin wt)
cplx mehler_leading(double t, Vec2 x, Vec2 y, const Config& cfg);

// Max-entry deviation of the finite-difference Im phi_eta_eta at eta* from B (sin wt/w)^2 I.
double im_phase_hessian_check(double t, Vec2 x, Vec2 y, const Config& cfg, double step = 1e-5);

// Solves x^t(y, eta0) = x for y by damped Newton.
Vec2 stationary_y0(double t, Vec2 x, Vec2 eta0, const Config& cfg);

// cos^2(wt) - b^2 sin^2(wt)/(w^2 |y|^4)
double det_xty(double t, Vec2 y, const Config& cfg);

struct MorseData {
  int index_m = 0;
  std::vector<std::pair<double, int>> zero_times;  // (time, multiplicity) in (0, t)
  double det_xty = 0.0;
};

MorseData morse_index(double t, Vec2 y, Vec2 eta, const Config& cfg);

// rho(y) = exp(-1/(1 - r^2/radius^2)) inside the disk.
class TestBump {
 public:
  // Throws InvalidParameter if the disk touches the origin or the line y^eta0 = b.
  TestBump(Vec2 center, double radius, Vec2 eta0, const Config& cfg);

  double operator()(Vec2 y) const;
  Vec2 center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vec2 center_;
  double radius_;
};

struct FilteredLeading {
  cplx value;
  Vec2 y0;
  int morse_m = 0;
  double det_xty = 0.0;
  bool outside_support = false;
};

// rho(y0) e^{i(y0.eta0 + S)/alpha} e^{-i pi m/2} |det x^t_y|^{-1/2}
FilteredLeading filtered_integral_leading(double t, Vec2 x, Vec2 eta0, const TestBump& rho,
                                          const Config& cfg);

struct FilteredBrute {
  cplx value;
  int outer_intervals = 0;
  double max_inner_error = 0.0;
};

// Integral of kernel_u0(t, x, y) rho(y) e^{i y.eta0/alpha} dy by an outer trapezoid rule over the
// bump square; outer_intervals <= 0 picks a spacing from the phase gradient |eta0 - eta*(y)|.
FilteredBrute filtered_integral_brute(double t, Vec2 x, Vec2 eta0, const TestBump& rho, const Config& cfg,
                                      const QuadratureSpec& q = {}, int outer_intervals = 0,
                                      unsigned threads = 0);

struct HessianCheck {
  cplx det_fd;
  cplx det_product;  // det Z * det x^t_y
  double relative = 0.0;
};

// 4x4 Hessian of psi = phi + y.eta0 in (y, eta) by fourth-order differences at (y0, eta0).
HessianCheck hessian_factorization_check(double t, Vec2 x, Vec2 y0, Vec2 eta0, const Config& cfg,
                                         double step = 1e-3);

}  // namespace abho
