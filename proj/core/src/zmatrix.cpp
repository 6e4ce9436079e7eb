#include "abho/zmatrix.hpp"

#include <cmath>
#include <numbers>

#include "abho/classical_flow.hpp"
#include "closed_forms.hpp"

namespace abho {

ComplexMat2 z_matrix(double t, const PhasePoint& p, const Config& cfg) {
  const FlowJacobians j = flow_jacobians(t, p, cfg);
  return j.xi_eta - cplx(0.0, cfg.damping_B) * j.x_eta;
}

cplx det_z_closed(double t, const PhasePoint& p, const Config& cfg) {
  const FlowState st = flow(t, p, cfg);
  const auto a = detail::time_angle(t, cfg.omega);
  const double w = cfg.omega;
  const double r2 = dot(st.x, st.x);
  const cplx base(a.c, -cfg.damping_B * a.s / w);
  const double k = cfg.flux_b * a.s / (w * r2);
  return base * base - k * k;
}

std::pair<cplx, cplx> z_eigenvalues(double t, const PhasePoint& p, const Config& cfg) {
  const FlowState st = flow(t, p, cfg);
  const auto a = detail::time_angle(t, cfg.omega);
  const double w = cfg.omega;
  const cplx base(a.c, -cfg.damping_B * a.s / w);
  const double k = cfg.flux_b * a.s / (w * dot(st.x, st.x));
  return {base + k, base - k};
}

ZValue sqrt_det_z_tracked(double t, const PhasePoint& p, const Config& cfg, double dt_track) {
  ZValue out;
  out.z = z_matrix(t, p, cfg);
  out.det_z = det_z_closed(t, p, cfg);
  if (t == 0.0) {
    out.sqrt_det_z = std::sqrt(out.det_z);
    return out;
  }
  const double span = std::abs(t);
  const double dir = t > 0.0 ? 1.0 : -1.0;
  if (!(dt_track > 0.0)) dt_track = std::min(0.01 / cfg.omega, span / 64.0);
  const double h_min = std::ldexp(dt_track, -40);

  double done = 0.0;
  double lift = 0.0;
  cplx prev = det_z_closed(0.0, p, cfg);
  while (done < span) {
    double h = std::min(dt_track, span - done);
    bool last = h == span - done;
    for (;;) {
      const double s = last ? t : dir * (done + h);
      const cplx next = det_z_closed(s, p, cfg);
      const double inc = std::arg(next / prev);
      if (std::abs(inc) < 0.5 * std::numbers::pi) {
        lift += inc;
        prev = next;
        done = last ? span : done + h;
        break;
      }
      h *= 0.5;
      last = false;
      if (h < h_min) {
        throw Error(ErrorKind::StepRefinementFailed, "arg det Z increment >= pi/2 below dt_track * 2^-40");
      }
    }
  }
  // re-anchor on the exact endpoint argument so the sum of rounded increments does not drift
  const double exact_arg = std::arg(out.det_z);
  lift = exact_arg + 2.0 * std::numbers::pi * std::round((lift - exact_arg) / (2.0 * std::numbers::pi));
  out.arg_lift_det = lift;
  out.sqrt_det_z = std::polar(std::sqrt(std::abs(out.det_z)), 0.5 * lift);
  return out;
}

ZValue sqrt_det_z_branch(double t, const PhasePoint& p, const Config& cfg) {
  const FlowState st = flow(t, p, cfg);
  const auto a = detail::time_angle(t, cfg.omega);
  const auto b = detail::sqrt_det_z_closed(a, dot(st.x, st.x), cfg);
  ZValue out;
  out.z = z_matrix(t, p, cfg);
  out.det_z = b.det_z;
  out.sqrt_det_z = b.sqrt_det_z;
  out.arg_lift_det = b.arg_lift;
  return out;
}

}  // namespace abho
