#pragma once

#include "abho/model.hpp"

namespace abho {

struct ActionValue {
  double s_value = 0.0;
  int winding_l = 0;
  double arg_lift = 0.0;  // continuous lift of Arg x^t - Arg y along the trajectory
};

struct PhaseValue {
  cplx phi;
  CVec2 grad_eta;
};

struct ArgLift {
  double lift = 0.0;
  int winding_l = 0;
};

// Closed-form S with the winding term b * lift.
ActionValue action(double t, const PhasePoint& p, const Config& cfg);

// Exact lift: each half period adds pi*sign(L) because x(s + pi/w) = -x(s).
double arg_lift_closed(double t, const PhasePoint& p, const Config& cfg);

// Sampled unwrapping of Arg x^s; dt_max <= 0 selects min(0.05/w, t/16).
ArgLift arg_lift(double t, const PhasePoint& p, const Config& cfg, double dt_max = 0.0);

// l such that lift = Arg x - Arg y + 2 pi l.
int winding_number(double lift, Vec2 x, Vec2 y);

PhaseValue phase(double t, Vec2 x, const PhasePoint& p, const Config& cfg);

}  // namespace abho
