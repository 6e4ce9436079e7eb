#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace abho::detail {

// wt split into k half turns plus a remainder r in [0, pi).
struct TimeAngle {
  double c = 1.0;  // cos(wt)
  double s = 0.0;  // sin(wt)
  double k = 0.0;  // floor(wt / pi)
  double rc = 1.0; // cos r = (-1)^k cos(wt)
  double rs = 0.0; // sin r = (-1)^k sin(wt) >= 0
};

inline TimeAngle time_angle(double t, double omega) {
  const double wt = omega * t;
  TimeAngle a;
  a.c = std::cos(wt);
  a.s = std::sin(wt);
  a.k = std::floor(wt / std::numbers::pi);
  const double sign = std::fmod(a.k, 2.0) == 0.0 ? 1.0 : -1.0;
  a.rc = sign * a.c;
  a.rs = std::max(0.0, sign * a.s);
  return a;
}

}  // namespace abho::detail
