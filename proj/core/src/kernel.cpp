#include "abho/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "abho/classical_flow.hpp"
#include "abho/zmatrix.hpp"
#include "closed_forms.hpp"
#include "kernel_internal.hpp"
#include "parallel.hpp"
#include "summation.hpp"

namespace abho {

double cutoff(Vec2 x, double eps) {
  const double s = norm(x) / eps;
  if (s <= 1.0) return 0.0;
  if (s >= 2.0) return 1.0;
  const double u = s - 1.0;
  const double f = std::exp(-1.0 / u);
  const double g = std::exp(-1.0 / (1.0 - u));
  return f / (f + g);
}

cplx symbol_u0(double t, const PhasePoint& p, const Config& cfg) {
  const double ty = cutoff(p.y, cfg.cutoff_eps);
  if (ty == 0.0) return 0.0;
  FlowState st;
  try {
    st = flow(t, p, cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::OriginCollision) return 0.0;
    throw;
  }
  const double tx = cutoff(st.x, cfg.cutoff_eps);
  if (tx == 0.0) return 0.0;
  if (on_collision_manifold(p, cfg)) {
    const auto tc = collision_time(p, cfg);
    if (tc && *tc <= std::abs(t)) {
      throw Error(ErrorKind::OriginCollision, "trajectory crossed the flux line before t");
    }
  }
  return tx * ty * sqrt_det_z_branch(t, p, cfg).sqrt_det_z;
}

QuadratureSpec validate_quadrature(const QuadratureSpec& q) {
  if (!(q.tail_tol > 0.0 && q.tail_tol < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "tail_tol must lie in (0, 1)");
  }
  if (q.osc_points_per_period < 4) {
    throw Error(ErrorKind::InvalidParameter, "osc_points_per_period must be >= 4");
  }
  if (q.max_points_per_axis < 32) {
    throw Error(ErrorKind::InvalidParameter, "max_points_per_axis must be >= 32");
  }
  if (!(q.refine_ratio_tol > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "refine_ratio_tol must be > 0");
  }
  return q;
}

namespace detail {

KernelIntegrand::KernelIntegrand(double t, Vec2 x_, Vec2 y_, const Config& cfg_)
    : cfg(cfg_), a(time_angle(t, cfg_.omega)), y(y_), x(x_), inv_alpha(1.0 / cfg_.alpha) {
  ay = vector_potential(y, cfg);
  theta_y = cutoff(y, cfg.cutoff_eps);
  y_norm = norm(y);
}

cplx KernelIntegrand::operator()(Vec2 eta) const {
  const double w = cfg.omega;
  const double L = wedge(y, eta) - cfg.flux_b;
  const bool on_line = std::abs(L) <= 1e-12 * std::max(1.0, y_norm * norm(eta));
  const Vec2 v = eta - ay;
  const Vec2 xt = a.c * y + (a.s / w) * v;
  const Vec2 d = x - xt;
  const double im = 0.5 * cfg.damping_B * dot(d, d) * inv_alpha;
  if (im > 700.0) return 0.0;
  const double r2 = dot(xt, xt);
  if (r2 <= cfg.cutoff_eps * cfg.cutoff_eps) return 0.0;
  const double th = theta_y * cutoff(xt, cfg.cutoff_eps);
  if (th == 0.0) return 0.0;
  const double k = cfg.flux_b / r2;
  const Vec2 xi = (-w * a.s) * y + a.c * v + Vec2{-k * xt.x2, k * xt.x1};
  const double re = (action_closed(a, y, eta, v, 0.0, cfg) + dot(d, xi)) * inv_alpha;
  cplx winding;
  if (!on_line) {
    winding = std::polar(1.0, cfg.flux_b * lift_closed(a, y, eta, L, w) * inv_alpha);
  } else {
    // the lift jumps across the collision manifold; a node on it takes the mean of both sides
    const double tiny = std::numeric_limits<double>::min();
    winding = 0.5 * (std::polar(1.0, cfg.flux_b * lift_closed(a, y, eta, tiny, w) * inv_alpha) +
                     std::polar(1.0, cfg.flux_b * lift_closed(a, y, eta, -tiny, w) * inv_alpha));
  }
  const cplx sq = sqrt_det_z_closed(a, r2, cfg).sqrt_det_z;
  return (th * std::exp(-im)) * std::polar(1.0, re) * winding * sq;
}

GridPlan plan_grid(double t, Vec2 x, Vec2 y, const Config& cfg, const QuadratureSpec& q) {
  const auto a = time_angle(t, cfg.omega);
  const double w = cfg.omega;
  const double so = std::abs(a.s) / w;
  GridPlan plan;
  plan.center = vector_potential(y, cfg) + (w / a.s) * (x - a.c * y);
  plan.sigma = std::sqrt(cfg.alpha / cfg.damping_B) / so;
  plan.radius = plan.sigma * std::sqrt(2.0 * std::log(1.0 / q.tail_tol));
  // largest |Re phi_eta| / alpha on the Gaussian disk, from phi_eta = (x - x^t)^T Z
  const double r_min = std::max(norm(x) - so * plan.radius, cfg.cutoff_eps);
  const double re_z = std::abs(a.c) + so * std::abs(cfg.flux_b) / (r_min * r_min);
  const double k_max = so * plan.radius * re_z / cfg.alpha;
  double h = plan.sigma / 1.5;
  if (k_max > 0.0) h = std::min(h, 2.0 * std::numbers::pi / (q.osc_points_per_period * k_max));
  int m = static_cast<int>(std::ceil(2.0 * plan.radius / h));
  m = std::max(m, 8);
  m = std::min(m, (q.max_points_per_axis - 1) / 2);
  plan.intervals = m;
  return plan;
}

std::vector<cplx> evaluate_nodes(const KernelIntegrand& f, const GridPlan& g) {
  const int m = g.intervals;
  const double h = 2.0 * g.radius / m;
  std::vector<cplx> vals(static_cast<std::size_t>(m + 1) * (m + 1));
  for (int i = 0; i <= m; ++i) {
    const double e1 = g.center.x1 - g.radius + i * h;
    for (int j = 0; j <= m; ++j) {
      vals[static_cast<std::size_t>(i) * (m + 1) + j] = f({e1, g.center.x2 - g.radius + j * h});
    }
  }
  return vals;
}

cplx grid_integral(std::span<const cplx> vals, const GridPlan& g) {
  const double h = 2.0 * g.radius / g.intervals;
  return pairwise_sum(vals) * (h * h);
}

namespace {

// Values on the halved grid, reusing the coarse nodes at even indices.
std::vector<cplx> refine_nodes(const KernelIntegrand& f, const GridPlan& coarse,
                               const std::vector<cplx>& old) {
  const int m = coarse.intervals;
  const int fm = 2 * m;
  const double h = 2.0 * coarse.radius / fm;
  std::vector<cplx> vals(static_cast<std::size_t>(fm + 1) * (fm + 1));
  for (int i = 0; i <= fm; ++i) {
    const double e1 = coarse.center.x1 - coarse.radius + i * h;
    for (int j = 0; j <= fm; ++j) {
      auto& slot = vals[static_cast<std::size_t>(i) * (fm + 1) + j];
      if (i % 2 == 0 && j % 2 == 0) {
        slot = old[static_cast<std::size_t>(i / 2) * (m + 1) + j / 2];
      } else {
        slot = f({e1, coarse.center.x2 - coarse.radius + j * h});
      }
    }
  }
  return vals;
}

double prefactor(const Config& cfg) {
  const double two_pi_alpha = 2.0 * std::numbers::pi * cfg.alpha;
  return 1.0 / (two_pi_alpha * two_pi_alpha);
}

}  // namespace

AdaptiveKernel kernel_adaptive(double t, Vec2 x, Vec2 y, const Config& cfg, const QuadratureSpec& q) {
  validate_config(cfg);
  validate_quadrature(q);
  const auto a = time_angle(t, cfg.omega);
  if (std::abs(a.s) < 1e-3) {
    throw Error(ErrorKind::NonDecayingPhase, "|sin(wt)| < 1e-3");
  }
  if (!(norm(y) > 0.0)) throw Error(ErrorKind::OriginSingularity, "y = 0");
  AdaptiveKernel out;
  out.plan = plan_grid(t, x, y, cfg, q);
  out.sample.eta_center = out.plan.center;
  out.sample.radius = out.plan.radius;
  if (norm(y) <= cfg.cutoff_eps) return out;

  const KernelIntegrand f(t, x, y, cfg);
  const double pre = prefactor(cfg);
  const double scale = cfg.omega / (2.0 * std::numbers::pi * cfg.alpha * std::abs(a.s));
  GridPlan coarse = out.plan;
  std::vector<cplx> vals = evaluate_nodes(f, coarse);
  for (;;) {
    GridPlan fine = coarse;
    fine.intervals = 2 * coarse.intervals;
    std::vector<cplx> fine_vals = refine_nodes(f, coarse, vals);
    const cplx i_coarse = pre * grid_integral(vals, coarse);
    const cplx i_fine = pre * grid_integral(fine_vals, fine);
    const double est = std::abs(i_fine - i_coarse);
    if (est <= q.refine_ratio_tol * std::abs(i_fine) || est <= q.tail_tol * scale) {
      out.sample.value = i_fine;
      out.sample.est_error = est;
      out.sample.n_points = static_cast<long>(fine_vals.size());
      out.plan = fine;
      return out;
    }
    if (2 * fine.intervals + 1 > q.max_points_per_axis) {
      throw Error(ErrorKind::QuadratureNotConverged,
                  "relative change " + format_double(est / std::abs(i_fine)) + " at " +
                      std::to_string(fine.intervals + 1) + " points per axis");
    }
    coarse = fine;
    vals = std::move(fine_vals);
  }
}

}  // namespace detail

KernelSample kernel_u0(double t, Vec2 x, Vec2 y, const Config& cfg, const QuadratureSpec& q) {
  return detail::kernel_adaptive(t, x, y, cfg, q).sample;
}

std::vector<Vec2> make_grid(const GridSpec& g) {
  if (g.nx < 0 || g.ny < 0) throw Error(ErrorKind::InvalidParameter, "grid sizes must be >= 0");
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(g.nx) * g.ny);
  auto coord = [](double lo, double hi, int n, int i) {
    return n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  };
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) pts.push_back({coord(g.x0, g.x1, g.nx, i), coord(g.y0, g.y1, g.ny, j)});
  }
  return pts;
}

std::vector<KernelRow> kernel_grid(double t, std::span<const Vec2> xs, Vec2 y, const Config& cfg,
                                   const QuadratureSpec& q, unsigned threads) {
  validate_config(cfg);
  validate_quadrature(q);
  std::vector<KernelRow> rows(xs.size());
  detail::parallel_for(xs.size(), threads, [&](std::size_t i) {
    rows[i].x = xs[i];
    try {
      rows[i].sample = kernel_u0(t, xs[i], y, cfg, q);
    } catch (const Error& e) {
      rows[i].error = e;
    }
  });
  return rows;
}

ResidualValue pde_residual(double t, Vec2 x, Vec2 y, const Config& cfg, const QuadratureSpec& q,
                           double fd_step_t, double fd_step_x) {
  if (!(fd_step_t > 0.0) || !(fd_step_x > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "finite-difference steps must be > 0");
  }
  if (!(norm(x) > 4.0 * fd_step_x)) {
    throw Error(ErrorKind::StencilOutOfDomain, "spatial stencil reaches the origin");
  }
  for (const double tt : {t - fd_step_t, t + fd_step_t}) {
    if (std::abs(std::sin(cfg.omega * tt)) < 1e-3) {
      throw Error(ErrorKind::StencilOutOfDomain, "time stencil reaches |sin(wt)| < 1e-3");
    }
  }
  const auto base = detail::kernel_adaptive(t, x, y, cfg, q);
  ResidualValue out;
  out.kernel = base.sample.value;
  if (norm(y) <= cfg.cutoff_eps) return out;

  const double pre = detail::prefactor(cfg);
  auto u = [&](double tt, Vec2 xx) {
    const detail::KernelIntegrand f(tt, xx, y, cfg);
    const auto vals = detail::evaluate_nodes(f, base.plan);
    return pre * detail::grid_integral(vals, base.plan);
  };
  const double ht = fd_step_t;
  const double hx = fd_step_x;
  const cplx u0 = u(t, x);
  const cplx dt = (u(t + ht, x) - u(t - ht, x)) / (2.0 * ht);
  cplx grad[2];
  cplx lap = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    const Vec2 e = axis == 0 ? Vec2{hx, 0.0} : Vec2{0.0, hx};
    const cplx p1 = u(t, x + e), m1 = u(t, x - e);
    const cplx p2 = u(t, x + 2.0 * e), m2 = u(t, x - 2.0 * e);
    grad[axis] = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * hx);
    lap += (-p2 + 16.0 * p1 - 30.0 * u0 + 16.0 * m1 - m2) / (12.0 * hx * hx);
  }
  const Vec2 A = vector_potential(x, cfg);
  const double al = cfg.alpha;
  const cplx h_u = -0.5 * al * al * lap + cplx(0.0, al) * (A.x1 * grad[0] + A.x2 * grad[1]) +
                   0.5 * dot(A, A) * u0 + 0.5 * cfg.omega * cfg.omega * dot(x, x) * u0;
  out.kernel = u0;
  out.residual = cplx(0.0, al) * dt - h_u;
  out.relative = std::abs(u0) > 0.0 ? std::abs(out.residual) / std::abs(u0) : 0.0;
  return out;
}

}  // namespace abho
