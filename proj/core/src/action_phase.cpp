#include "abho/action_phase.hpp"

#include <cmath>
#include <numbers>

#include "abho/classical_flow.hpp"
#include "closed_forms.hpp"

namespace abho {

namespace {

void require_off_manifold(const PhasePoint& p, const Config& cfg) {
  if (!(norm(p.y) > 0.0)) throw Error(ErrorKind::OriginSingularity, "initial position y = 0");
  if (on_collision_manifold(p, cfg)) {
    throw Error(ErrorKind::CollisionManifold, "y^eta = b: winding integral diverges");
  }
}

}  // namespace

int winding_number(double lift, Vec2 x, Vec2 y) {
  const double principal = std::atan2(x.x2, x.x1) - std::atan2(y.x2, y.x1);
  return static_cast<int>(std::lround((lift - principal) / (2.0 * std::numbers::pi)));
}

double arg_lift_closed(double t, const PhasePoint& p, const Config& cfg) {
  require_off_manifold(p, cfg);
  const auto a = detail::time_angle(t, cfg.omega);
  return detail::lift_closed(a, p.y, p.eta, wedge(p.y, p.eta) - cfg.flux_b, cfg.omega);
}

ActionValue action(double t, const PhasePoint& p, const Config& cfg) {
  require_off_manifold(p, cfg);
  const FlowState st = flow(t, p, cfg);
  const auto a = detail::time_angle(t, cfg.omega);
  const Vec2 v = p.eta - vector_potential(p.y, cfg);
  const double L = wedge(p.y, p.eta) - cfg.flux_b;
  ActionValue out;
  out.arg_lift = detail::lift_closed(a, p.y, p.eta, L, cfg.omega);
  out.s_value = detail::action_closed(a, p.y, p.eta, v, out.arg_lift, cfg);
  out.winding_l = winding_number(out.arg_lift, st.x, p.y);
  return out;
}

ArgLift arg_lift(double t, const PhasePoint& p, const Config& cfg, double dt_max) {
  require_off_manifold(p, cfg);
  if (t == 0.0) return {};
  const double span = std::abs(t);
  const double dir = t > 0.0 ? 1.0 : -1.0;
  if (!(dt_max > 0.0)) dt_max = std::min(0.05 / cfg.omega, span / 16.0);
  const double h_min = std::ldexp(dt_max, -40);

  double done = 0.0;
  double lift = 0.0;
  Vec2 prev = p.y;
  while (done < span) {
    double h = std::min(dt_max, span - done);
    bool last = h == span - done;
    for (;;) {
      const double s = last ? t : dir * (done + h);
      const Vec2 next = flow(s, p, cfg).x;
      const double inc = std::atan2(wedge(prev, next), dot(prev, next));
      if (std::abs(inc) < 0.5 * std::numbers::pi) {
        lift += inc;
        prev = next;
        done = last ? span : done + h;
        break;
      }
      h *= 0.5;
      last = false;
      if (h < h_min) {
        throw Error(ErrorKind::StepRefinementFailed, "angle increment >= pi/2 below dt_max * 2^-40");
      }
    }
  }
  return {lift, winding_number(lift, prev, p.y)};
}

PhaseValue phase(double t, Vec2 x, const PhasePoint& p, const Config& cfg) {
  const ActionValue act = action(t, p, cfg);
  const FlowJacobians jac = flow_jacobians(t, p, cfg);
  const FlowState st = flow(t, p, cfg);
  const Vec2 d = x - st.x;
  PhaseValue out;
  out.phi = cplx(act.s_value + dot(d, st.xi), 0.5 * cfg.damping_B * dot(d, d));
  // S_eta = x_eta^T xi cancels the derivative of -x^t.xi, leaving (x - x^t)^T Z
  const ComplexMat2 z = jac.xi_eta - cplx(0.0, cfg.damping_B) * jac.x_eta;
  out.grad_eta = left_multiply(d, z);
  return out;
}

}  // namespace abho
