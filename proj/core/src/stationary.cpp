#include "abho/stationary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "abho/action_phase.hpp"
#include "abho/classical_flow.hpp"
#include "abho/zmatrix.hpp"
#include "parallel.hpp"
#include "summation.hpp"
#include "time_angle.hpp"

namespace abho {

namespace {

constexpr double kPi = std::numbers::pi;

detail::TimeAngle decaying_angle(double t, const Config& cfg) {
  validate_config(cfg);
  const auto a = detail::time_angle(t, cfg.omega);
  if (std::abs(a.s) < 1e-3) throw Error(ErrorKind::NonDecayingPhase, "|sin(wt)| < 1e-3");
  return a;
}

}  // namespace

StationaryEta stationary_eta(double t, Vec2 x, Vec2 y, const Config& cfg) {
  const auto a = decaying_angle(t, cfg);
  if (!(norm(y) > 0.0)) throw Error(ErrorKind::OriginSingularity, "y = 0");
  const double w = cfg.omega;
  StationaryEta out;
  out.eta_star = vector_potential(y, cfg) + (w / a.s) * (x - a.c * y);
  const PhasePoint p{y, out.eta_star};
  if (on_collision_manifold(p, cfg)) {
    throw Error(ErrorKind::CollisionManifold, "(y, eta*) lies on y^eta = b");
  }
  if (min_radius(t, p, cfg) < 1e-8 * norm(y)) {
    throw Error(ErrorKind::TrajectoryHitsOrigin, "classical path from y to x passes the flux line");
  }
  const ActionValue act = action(t, p, cfg);
  const double winding = std::atan2(x.x2, x.x1) - std::atan2(y.x2, y.x1) + 2.0 * kPi * act.winding_l;
  const double s_closed =
      (w / (2.0 * a.s)) * (a.c * (dot(x, x) + dot(y, y)) - 2.0 * dot(x, y)) + cfg.flux_b * winding;
  if (std::abs(s_closed - act.s_value) > 1e-9 * std::max(1.0, std::abs(act.s_value))) {
    throw Error(ErrorKind::InconsistentAction, "S(eta*) = " + format_double(act.s_value) +
                                                   " but the closed form gives " + format_double(s_closed));
  }
  out.s_at_star = act.s_value;
  out.winding_l = act.winding_l;
  return out;
}

cplx mehler_kernel(double t, Vec2 x, Vec2 y, const Config& cfg) {
  const auto a = decaying_angle(t, cfg);
  const double w = cfg.omega;
  const double al = cfg.alpha;
  const double arg = w * (a.c * (dot(x, x) + dot(y, y)) - 2.0 * dot(x, y)) / (2.0 * al * a.s);
  return std::polar(1.0, arg) * w / (cplx(0.0, 2.0 * kPi * al * a.s));
}

cplx mehler_leading(double t, Vec2 x, Vec2 y, const Config& cfg) {
  const auto a = decaying_angle(t, cfg);
  const double eps = cfg.cutoff_eps;
  const double rho_x = std::sqrt(2.0 * cfg.alpha * std::log(1e10) / cfg.damping_B);
  if (norm(y) < 2.0 * eps || norm(x) - rho_x < 2.0 * eps) {
    throw Error(ErrorKind::CutoffInterference, "cutoffs are not identically 1 on the Gaussian support");
  }
  const StationaryEta st = stationary_eta(t, x, y, cfg);
  return std::polar(1.0, st.s_at_star / cfg.alpha) * cfg.omega / cplx(0.0, 2.0 * kPi * cfg.alpha * a.s);
}

double im_phase_hessian_check(double t, Vec2 x, Vec2 y, const Config& cfg, double step) {
  const auto a = decaying_angle(t, cfg);
  const StationaryEta st = stationary_eta(t, x, y, cfg);
  auto im_phi = [&](double d1, double d2) {
    return phase(t, x, {y, st.eta_star + Vec2{d1, d2}}, cfg).phi.imag();
  };
  const double h = step;
  const double f0 = im_phi(0, 0);
  const double h11 = (im_phi(h, 0) - 2.0 * f0 + im_phi(-h, 0)) / (h * h);
  const double h22 = (im_phi(0, h) - 2.0 * f0 + im_phi(0, -h)) / (h * h);
  const double h12 = (im_phi(h, h) - im_phi(h, -h) - im_phi(-h, h) + im_phi(-h, -h)) / (4.0 * h * h);
  const double so = a.s / cfg.omega;
  const double expected = cfg.damping_B * so * so;
  return std::max({std::abs(h11 - expected), std::abs(h22 - expected), std::abs(h12)});
}

double det_xty(double t, Vec2 y, const Config& cfg) {
  const auto a = detail::time_angle(t, cfg.omega);
  const double k = cfg.flux_b * a.s / (cfg.omega * dot(y, y));
  return a.c * a.c - k * k;
}

namespace {

struct Real2 {
  double a11, a12, a21, a22;
  double det() const { return a11 * a22 - a12 * a21; }
  Vec2 solve(Vec2 r) const {
    const double d = det();
    return {(a22 * r.x1 - a12 * r.x2) / d, (-a21 * r.x1 + a11 * r.x2) / d};
  }
  Vec2 transpose_times(Vec2 r) const { return {a11 * r.x1 + a21 * r.x2, a12 * r.x1 + a22 * r.x2}; }
  Vec2 times(Vec2 r) const { return {a11 * r.x1 + a12 * r.x2, a21 * r.x1 + a22 * r.x2}; }
};

Real2 x_y_jacobian(const detail::TimeAngle& a, Vec2 y, const Config& cfg) {
  const ComplexMat2 ax = potential_jacobian(y, cfg);
  const double so = a.s / cfg.omega;
  return {a.c - so * ax(0, 0).real(), -so * ax(0, 1).real(), -so * ax(1, 0).real(),
          a.c - so * ax(1, 1).real()};
}

}  // namespace

Vec2 stationary_y0(double t, Vec2 x, Vec2 eta0, const Config& cfg) {
  const auto a = decaying_angle(t, cfg);
  const double w = cfg.omega;
  const double so = a.s / w;
  const double tol = 1e-12 * (1.0 + norm(x));

  // residual norm, or +inf where the flow is undefined
  auto residual = [&](Vec2 y, Vec2* f_out) {
    try {
      const Vec2 f = flow(t, {y, eta0}, cfg).x - x;
      if (f_out) *f_out = f;
      return norm(f);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Vec2 y;
  if (std::abs(a.c) > 0.1) {
    y = (x - so * eta0) / a.c;
  } else {
    // at cos(wt) = 0 the system reduces to A(y) = eta0 - x/so
    const Vec2 wv = eta0 - x / so;
    const double ww = dot(wv, wv);
    y = (cfg.flux_b != 0.0 && ww > 0.0) ? (cfg.flux_b / ww) * Vec2{wv.x2, -wv.x1} : x;
    Vec2 f;
    const double r0 = residual(y, &f);
    if (std::isfinite(r0) && r0 > tol) {
      const Real2 j = x_y_jacobian(a, y, cfg);
      const Vec2 g = j.transpose_times(f);
      const Vec2 jg = j.times(g);
      double lambda = dot(jg, jg) > 0.0 ? dot(f, jg) / dot(jg, jg) : 0.0;
      for (int k = 0; k < 40 && lambda > 0.0; ++k, lambda *= 0.5) {
        if (residual(y - lambda * g, nullptr) < r0) {
          y = y - lambda * g;
          break;
        }
      }
    }
  }

  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    Vec2 f;
    const double r = residual(y, &f);
    if (!std::isfinite(r)) throw Error(ErrorKind::NoConvergence, "Newton iterate left the flow domain");
    if (r < tol) {
      converged = true;
      break;
    }
    const Real2 j = x_y_jacobian(a, y, cfg);
    if (std::abs(j.det()) < 1e-10) {
      throw Error(ErrorKind::DegenerateJacobian, "|det x^t_y| < 1e-10 at the Newton iterate");
    }
    const Vec2 dy = j.solve(f);
    double lambda = 1.0;
    while (lambda > 1e-6 && !(residual(y - lambda * dy, nullptr) < r)) lambda *= 0.5;
    y = y - lambda * dy;
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "50 Newton iterations without convergence");
  if (on_collision_manifold({y, eta0}, cfg)) {
    throw Error(ErrorKind::CollisionManifold, "y0^eta0 = b");
  }
  if (std::abs(x_y_jacobian(a, y, cfg).det()) < 1e-10) {
    throw Error(ErrorKind::DegenerateJacobian, "|det x^t_y(y0, eta0)| < 1e-10");
  }
  const double scale = std::max(1.0, norm(x) * norm(y));
  const double e1 = wedge(x, y) + (wedge(y, eta0) - cfg.flux_b) * so;
  const double e2 = dot(x, y) - a.c * dot(y, y) - so * dot(eta0, y);
  if (std::abs(e1) > 1e-10 * scale || std::abs(e2) > 1e-10 * scale) {
    throw Error(ErrorKind::NoConvergence, "stationary system residual above 1e-10");
  }
  return y;
}

MorseData morse_index(double t, Vec2 y, Vec2 /*eta*/, const Config& cfg) {
  if (!(norm(y) > 0.0)) throw Error(ErrorKind::OriginSingularity, "y = 0");
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidParameter, "morse_index needs t >= 0");
  const double w = cfg.omega;
  MorseData out;
  const double wt = w * t;
  if (cfg.flux_b == 0.0) {
    for (double z = 0.5 * kPi; z < wt; z += kPi) out.zero_times.emplace_back(z / w, 2);
  } else {
    const double theta0 = std::atan(w * dot(y, y) / std::abs(cfg.flux_b));
    for (int j = 0;; ++j) {
      const double z1 = theta0 + j * kPi;
      const double z2 = kPi - theta0 + j * kPi;
      if (z1 >= wt) break;
      out.zero_times.emplace_back(z1 / w, 1);
      if (z2 < wt) out.zero_times.emplace_back(z2 / w, 1);
    }
  }
  for (const auto& z : out.zero_times) out.index_m += z.second;
  out.det_xty = det_xty(t, y, cfg);
  if (std::abs(out.det_xty) < 1e-10) {
    throw Error(ErrorKind::ZeroAtEndpoint, "det x^t_y vanishes at the endpoint");
  }
  return out;
}

TestBump::TestBump(Vec2 center, double radius, Vec2 eta0, const Config& cfg)
    : center_(center), radius_(radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidParameter, "bump radius must be > 0");
  if (norm(center) <= radius) throw Error(ErrorKind::InvalidParameter, "bump support contains the origin");
  const double en = norm(eta0);
  if (en == 0.0) {
    if (cfg.flux_b == 0.0) throw Error(ErrorKind::InvalidParameter, "eta0 = 0 with b = 0: y^eta0 = b everywhere");
    return;
  }
  if (std::abs(wedge(center, eta0) - cfg.flux_b) / en <= radius) {
    throw Error(ErrorKind::InvalidParameter, "bump support meets the line y^eta0 = b");
  }
}

double TestBump::operator()(Vec2 y) const {
  const Vec2 d = y - center_;
  const double r2 = dot(d, d) / (radius_ * radius_);
  return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

FilteredLeading filtered_integral_leading(double t, Vec2 x, Vec2 eta0, const TestBump& rho, const Config& cfg) {
  FilteredLeading out;
  out.y0 = stationary_y0(t, x, eta0, cfg);
  const double r = rho(out.y0);
  if (r == 0.0) {
    out.outside_support = true;
    return out;
  }
  const MorseData md = morse_index(t, out.y0, eta0, cfg);
  out.morse_m = md.index_m;
  out.det_xty = md.det_xty;
  const double S = action(t, {out.y0, eta0}, cfg).s_value;
  const double ph = (dot(out.y0, eta0) + S) / cfg.alpha - 0.5 * kPi * md.index_m;
  out.value = std::polar(r / std::sqrt(std::abs(md.det_xty)), ph);
  return out;
}

FilteredBrute filtered_integral_brute(double t, Vec2 x, Vec2 eta0, const TestBump& rho, const Config& cfg,
                                      const QuadratureSpec& q, int outer_intervals, unsigned threads) {
  const auto a = decaying_angle(t, cfg);
  const double w = cfg.omega;
  const double R = rho.radius();
  const Vec2 c = rho.center();
  int n = outer_intervals;
  if (n <= 0) {
    double gmax = 0.0;
    auto probe = [&](Vec2 y) {
      const Vec2 es = vector_potential(y, cfg) + (w / a.s) * (x - a.c * y);
      gmax = std::max(gmax, norm(eta0 - es));
    };
    probe(c);
    for (int k = 0; k < 64; ++k) {
      const double th = 2.0 * kPi * k / 64.0;
      for (const double f : {0.5, 1.0}) probe(c + f * R * Vec2{std::cos(th), std::sin(th)});
    }
    const double kmax = gmax / cfg.alpha;
    const double h = 2.0 * kPi / (2.0 * kmax + 150.0 / R);
    n = std::max(16, static_cast<int>(std::ceil(2.0 * R / h)));
  }
  const double h = 2.0 * R / n;
  std::vector<std::vector<cplx>> rows(static_cast<std::size_t>(n - 1));
  std::vector<double> row_err(rows.size(), 0.0);
  detail::parallel_for(rows.size(), threads, [&](std::size_t i) {
    auto& row = rows[i];
    row.assign(static_cast<std::size_t>(n - 1), 0.0);
    const double y1 = c.x1 - R + static_cast<double>(i + 1) * h;
    for (int j = 1; j < n; ++j) {
      const Vec2 y{y1, c.x2 - R + j * h};
      const double r = rho(y);
      if (r == 0.0) continue;
      const KernelSample ks = kernel_u0(t, x, y, cfg, q);
      row_err[i] = std::max(row_err[i], ks.est_error);
      row[static_cast<std::size_t>(j - 1)] = ks.value * r * std::polar(1.0, dot(y, eta0) / cfg.alpha);
    }
  });
  std::vector<cplx> flat;
  flat.reserve(rows.size() * rows.size());
  for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
  FilteredBrute out;
  out.value = detail::pairwise_sum<cplx>(flat) * (h * h);
  out.outer_intervals = n;
  out.max_inner_error = *std::max_element(row_err.begin(), row_err.end());
  return out;
}

namespace {

cplx det4(std::array<std::array<cplx, 4>, 4> m) {
  cplx det = 1.0;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (m[piv][col] == cplx(0.0)) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < 4; ++r) {
      const cplx f = m[r][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
    }
  }
  return det;
}

}  // namespace

HessianCheck hessian_factorization_check(double t, Vec2 x, Vec2 y0, Vec2 eta0, const Config& cfg, double step) {
  using P4 = std::array<double, 4>;
  auto psi = [&](const P4& v) {
    const Vec2 y{v[0], v[1]};
    return phase(t, x, {y, {v[2], v[3]}}, cfg).phi + dot(y, eta0);
  };
  const P4 base{y0.x1, y0.x2, eta0.x1, eta0.x2};
  auto at = [&](int i, double di, int j, double dj) {
    P4 v = base;
    v[static_cast<std::size_t>(i)] += di;
    v[static_cast<std::size_t>(j)] += dj;
    return psi(v);
  };
  const double h = step;
  const std::array<std::pair<int, double>, 4> d1{{{-2, 1.0 / 12}, {-1, -8.0 / 12}, {1, 8.0 / 12}, {2, -1.0 / 12}}};
  const cplx f0 = psi(base);
  std::array<std::array<cplx, 4>, 4> hess{};
  for (int i = 0; i < 4; ++i) {
    hess[i][i] = (-at(i, 2 * h, i, 0) + 16.0 * at(i, h, i, 0) - 30.0 * f0 + 16.0 * at(i, -h, i, 0) -
                  at(i, -2 * h, i, 0)) / (12.0 * h * h);
    for (int j = i + 1; j < 4; ++j) {
      cplx acc = 0.0;
      for (const auto& [oi, wi] : d1) {
        for (const auto& [oj, wj] : d1) acc += wi * wj * at(i, oi * h, j, oj * h);
      }
      hess[i][j] = hess[j][i] = acc / (h * h);
    }
  }
  HessianCheck out;
  out.det_fd = det4(hess);
  out.det_product = det_z_closed(t, {y0, eta0}, cfg) * det_xty(t, y0, cfg);
  out.relative = std::abs(out.det_fd - out.det_product) / std::abs(out.det_product);
  return out;
}

}  // namespace abho
