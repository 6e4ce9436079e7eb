#include "abho/classical_flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "time_angle.hpp"

namespace abho {

Vec2 vector_potential(Vec2 x, const Config& cfg) {
  const double r = norm(x);
  if (!(r >= 1e-300)) throw Error(ErrorKind::OriginSingularity, "vector potential at |x| < 1e-300");
  const double k = cfg.flux_b / r / r;
  return {-k * x.x2, k * x.x1};
}

ComplexMat2 potential_jacobian(Vec2 x, const Config& cfg) {
  const double r = norm(x);
  if (!(r >= 1e-300)) throw Error(ErrorKind::OriginSingularity, "potential Jacobian at |x| < 1e-300");
  const double k = cfg.flux_b / (r * r) / (r * r);
  const double d = 2.0 * x.x1 * x.x2 * k;
  const double o = (x.x2 * x.x2 - x.x1 * x.x1) * k;
  return real_matrix(d, o, o, -d);
}

double hamiltonian(Vec2 x, Vec2 xi, const Config& cfg) {
  const Vec2 v = xi - vector_potential(x, cfg);
  return 0.5 * dot(v, v) + 0.5 * cfg.omega * cfg.omega * dot(x, x);
}

namespace {

void require_nonzero_y(const PhasePoint& p) {
  if (!(norm(p.y) > 0.0)) throw Error(ErrorKind::OriginSingularity, "initial position y = 0");
}

}  // namespace

FlowState flow(double t, const PhasePoint& p, const Config& cfg) {
  require_nonzero_y(p);
  const auto a = detail::time_angle(t, cfg.omega);
  const Vec2 v = p.eta - vector_potential(p.y, cfg);
  const Vec2 x = a.c * p.y + (a.s / cfg.omega) * v;
  if (norm(x) < 1e-12 * norm(p.y)) {
    throw Error(ErrorKind::OriginCollision, "trajectory reaches the flux line at t = " + format_double(t));
  }
  const Vec2 xi = (-cfg.omega * a.s) * p.y + a.c * v + vector_potential(x, cfg);
  return {x, xi, t};
}

FlowJacobians flow_jacobians(double t, const PhasePoint& p, const Config& cfg) {
  const FlowState st = flow(t, p, cfg);
  const auto a = detail::time_angle(t, cfg.omega);
  const double so = a.s / cfg.omega;
  const ComplexMat2 ax_y = potential_jacobian(p.y, cfg);
  const ComplexMat2 ax_x = potential_jacobian(st.x, cfg);
  FlowJacobians j;
  j.x_eta = ComplexMat2::scalar(so);
  j.xi_eta = ComplexMat2::scalar(a.c) + cplx(so) * ax_x;
  j.x_y = ComplexMat2::scalar(a.c) - cplx(so) * ax_y;
  j.xi_y = ComplexMat2::scalar(-cfg.omega * a.s) - cplx(a.c) * ax_y + ax_x * j.x_y;
  return j;
}

double angular_momentum(const PhasePoint& p, const Config& cfg) {
  require_nonzero_y(p);
  return wedge(p.y, p.eta) - cfg.flux_b;
}

double kinetic_angular_momentum(Vec2 x, Vec2 xi, const Config& cfg) {
  return wedge(x, xi - vector_potential(x, cfg));
}

std::optional<double> collision_time(const PhasePoint& p, const Config& cfg) {
  require_nonzero_y(p);
  if (!on_collision_manifold(p, cfg)) return std::nullopt;
  // cos(wt)|y|^2 + sin(wt) eta.y / w = 0, smallest root in (0, pi/w)
  return std::atan2(dot(p.y, p.y), -dot(p.eta, p.y) / cfg.omega) / cfg.omega;
}

double min_radius(double t, const PhasePoint& p, const Config& cfg) {
  require_nonzero_y(p);
  const double w = cfg.omega;
  const Vec2 v = p.eta - vector_potential(p.y, cfg);
  // |x^s|^2 = P + Q cos(2ws) + R sin(2ws)
  const double yy = dot(p.y, p.y);
  const double vv = dot(v, v) / (w * w);
  const double P = 0.5 * (yy + vv);
  const double Q = 0.5 * (yy - vv);
  const double R = dot(p.y, v) / w;
  const double amp = std::hypot(Q, R);
  const double L = wedge(p.y, v) / w;
  const double global_min = L * L / (P + amp);

  auto r2 = [&](double s) {
    const auto a = detail::time_angle(s, w);
    const Vec2 x = a.c * p.y + (a.s / w) * v;
    return dot(x, x);
  };
  const double span = 2.0 * w * std::abs(t);
  if (span >= 2.0 * std::numbers::pi) return std::sqrt(global_min);
  double best = std::min(r2(0.0), r2(t));
  // interior minimum at 2ws = atan2(R, Q) + pi (mod 2 pi)
  double phase = std::atan2(R, Q) + std::numbers::pi;
  phase = std::fmod(phase, 2.0 * std::numbers::pi);
  if (phase < 0.0) phase += 2.0 * std::numbers::pi;
  if (phase <= span) best = std::min(best, global_min);
  return std::sqrt(std::max(best, 0.0));
}

namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::array<double, 5>;

struct HamiltonRhs {
  const Config& cfg;

  void operator()(const OdeState& u, OdeState& du, double /*s*/) const {
    const Vec2 x{u[0], u[1]};
    const Vec2 xi{u[2], u[3]};
    if (norm(x) < 1e-6) {
      throw Error(ErrorKind::NearOriginAbort, "ODE trajectory within 1e-6 of the origin");
    }
    const Vec2 A = vector_potential(x, cfg);
    const ComplexMat2 Ax = potential_jacobian(x, cfg);
    const Vec2 v = xi - A;
    const double w2 = cfg.omega * cfg.omega;
    du[0] = v.x1;
    du[1] = v.x2;
    du[2] = Ax(0, 0).real() * v.x1 + Ax(0, 1).real() * v.x2 - w2 * x.x1;
    du[3] = Ax(1, 0).real() * v.x1 + Ax(1, 1).real() * v.x2 - w2 * x.x2;
    du[4] = dot(v, xi) - (0.5 * dot(v, v) + 0.5 * w2 * dot(x, x));
  }
};

}  // namespace

OdeActionResult integrate_action_ode(double t, const PhasePoint& p, const Config& cfg, double tol) {
  require_nonzero_y(p);
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidParameter, "ODE oracle needs t >= 0");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "ODE tolerance must be > 0");
  OdeActionResult out;
  OdeState u{p.y.x1, p.y.x2, p.eta.x1, p.eta.x2, 0.0};
  const HamiltonRhs rhs{cfg};
  {
    OdeState du{};
    rhs(u, du, 0.0);
  }

  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<OdeState>>(tol, tol);
  constexpr long max_steps = 10'000'000;
  double s = 0.0;
  double dt = std::min(1e-3 / cfg.omega, t);
  const double t_eps = 1e-15 * std::max(1.0, t);
  while (t - s > t_eps) {
    dt = std::min(dt, t - s);
    const auto res = stepper.try_step(rhs, u, s, dt);
    if (res == odeint::success) {
      if (++out.steps > max_steps) {
        throw Error(ErrorKind::ToleranceNotMet, "ODE oracle exceeded 1e7 steps");
      }
    } else if (dt < 1e-14 * std::max(1.0, t)) {
      throw Error(ErrorKind::ToleranceNotMet, "ODE step size underflow at s = " + format_double(s));
    }
  }
  out.state = {{u[0], u[1]}, {u[2], u[3]}, t};
  out.action = u[4];
  return out;
}

FlowState integrate_flow_ode(double t, const PhasePoint& p, const Config& cfg, double tol) {
  return integrate_action_ode(t, p, cfg, tol).state;
}

}  // namespace abho
