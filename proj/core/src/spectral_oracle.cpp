#include "abho/spectral_oracle.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "summation.hpp"
#include "time_angle.hpp"

namespace abho {

namespace {

constexpr double kPi = std::numbers::pi;

double channel_order(int m, const Config& cfg) { return std::abs(m - cfg.flux_b / cfg.alpha); }

}  // namespace

double eigenvalue(int n, int m, const Config& cfg) {
  if (n < 0) throw Error(ErrorKind::InvalidParameter, "n must be >= 0");
  return cfg.alpha * cfg.omega * (2.0 * n + channel_order(m, cfg) + 1.0);
}

std::vector<double> radial_eigenfunctions(int n_max, int m, double r, const Config& cfg) {
  if (n_max < 0) throw Error(ErrorKind::InvalidParameter, "n must be >= 0");
  if (n_max > 400) throw Error(ErrorKind::OverflowGuard, "Laguerre recurrence limited to n <= 400");
  if (!(r >= 0.0)) throw Error(ErrorKind::InvalidParameter, "r must be >= 0");
  const double nu = channel_order(m, cfg);
  const double scale = cfg.omega / cfg.alpha;
  const double X = scale * r * r;
  double log_r_part;
  if (r == 0.0) {
    if (nu > 0.0) return std::vector<double>(static_cast<std::size_t>(n_max) + 1, 0.0);
    log_r_part = 0.0;
  } else {
    log_r_part = nu * std::log(r) - 0.5 * X;
  }
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  double l_prev = 0.0;
  double l_cur = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    if (n == 1) {
      l_prev = l_cur;
      l_cur = 1.0 + nu - X;
    } else if (n > 1) {
      const int k = n - 1;
      const double l_next = ((2.0 * k + 1.0 + nu - X) * l_cur - (k + nu) * l_prev) / (k + 1.0);
      l_prev = l_cur;
      l_cur = l_next;
    }
    const double log_norm =
        0.5 * (std::log(2.0) + std::lgamma(n + 1.0) + (nu + 1.0) * std::log(scale) - std::lgamma(n + nu + 1.0));
    out[static_cast<std::size_t>(n)] = std::exp(log_norm + log_r_part) * l_cur;
  }
  return out;
}

double radial_eigenfunction(int n, int m, double r, const Config& cfg) {
  return radial_eigenfunctions(n, m, r, cfg).back();
}

cplx eigenfunction(int n, int m, double r, double theta, const Config& cfg) {
  return std::polar(radial_eigenfunction(n, m, r, cfg) / std::sqrt(2.0 * kPi), m * theta);
}

namespace {

struct ChannelFrame {
  double prefactor;  // w / (alpha |sin wt|)
  double arg_w;      // w r r' / (alpha |sin wt|)
  double half_turns; // floor(wt / pi)
  cplx chirp;        // exp(i w (r^2 + r'^2) cot(wt) / (2 alpha))
};

ChannelFrame channel_frame(double t, double r, double rp, const Config& cfg) {
  const auto a = detail::time_angle(t, cfg.omega);
  if (std::abs(a.s) < 1e-3) throw Error(ErrorKind::NonDecayingPhase, "|sin(wt)| < 1e-3");
  ChannelFrame f;
  f.prefactor = cfg.omega / (cfg.alpha * std::abs(a.s));
  f.arg_w = f.prefactor * r * rp;
  f.half_turns = a.k;
  f.chirp = std::polar(1.0, cfg.omega * (r * r + rp * rp) * (a.c / a.s) / (2.0 * cfg.alpha));
  return f;
}

// e^{-i (1 + nu)(pi/2 + k pi)} J_nu(w r r' / (alpha |sin wt|))
cplx channel_factor(const ChannelFrame& f, double nu) {
  const double j = boost::math::cyl_bessel_j(nu, f.arg_w);
  return std::polar(j, -(1.0 + nu) * (0.5 + f.half_turns) * kPi);
}

}  // namespace

cplx channel_kernel(double t, int m, double r, double rp, const Config& cfg) {
  const ChannelFrame f = channel_frame(t, r, rp, cfg);
  return f.prefactor * f.chirp * channel_factor(f, channel_order(m, cfg));
}

SpectralValue exact_propagator(double t, Vec2 x, Vec2 y, const Config& cfg, const SpectralTruncation& trunc) {
  validate_config(cfg);
  if (trunc.m_abs_max < 0) throw Error(ErrorKind::InvalidParameter, "m_abs_max must be >= 0");
  const double r = norm(x);
  const double rp = norm(y);
  const ChannelFrame f = channel_frame(t, r, rp, cfg);
  const double dtheta = std::atan2(x.x2, x.x1) - std::atan2(y.x2, y.x1);
  const int M = trunc.m_abs_max;
  std::vector<cplx> terms;
  terms.reserve(static_cast<std::size_t>(2 * M + 1));
  for (int m = -M; m <= M; ++m) {
    terms.push_back(std::polar(1.0, m * dtheta) * channel_factor(f, channel_order(m, cfg)));
  }
  double tail = 0.0;
  for (int extra = 1; extra <= 40; ++extra) {
    for (const int m : {-M - extra, M + extra}) {
      tail += std::abs(boost::math::cyl_bessel_j(channel_order(m, cfg), f.arg_w));
    }
  }
  SpectralValue out;
  out.value = detail::pairwise_sum<cplx>(terms) * f.chirp * (f.prefactor / (2.0 * kPi));
  out.tail_estimate = tail;
  if (tail > trunc.tolerance) {
    throw Error(ErrorKind::TruncationInsufficient,
                "dropped channels contribute " + format_double(tail) + " at |m| > " + std::to_string(M));
  }
  return out;
}

SpectralValue eigen_sum_propagator(double t, Vec2 x, Vec2 y, const Config& cfg, const SpectralTruncation& trunc,
                                   double tau) {
  validate_config(cfg);
  if (trunc.m_abs_max < 0) throw Error(ErrorKind::InvalidParameter, "m_abs_max must be >= 0");
  if (!(tau >= 0.0)) throw Error(ErrorKind::InvalidParameter, "tau must be >= 0");
  // real time uses the fixed Abel factor e^{-delta E}, delta = 1e-6 alpha/w
  const double decay_per_energy = tau > 0.0 ? tau / cfg.alpha : 1e-6 * cfg.alpha / cfg.omega;
  const double r = norm(x);
  const double rp = norm(y);
  const double dtheta = std::atan2(x.x2, x.x1) - std::atan2(y.x2, y.x1);
  const int N = trunc.n_max;
  const int M = trunc.m_abs_max;
  std::vector<cplx> terms;
  double last_shell = 0.0;
  for (int m = -M; m <= M; ++m) {
    const auto rx = radial_eigenfunctions(N, m, r, cfg);
    const auto ry = radial_eigenfunctions(N, m, rp, cfg);
    const cplx angular = std::polar(1.0 / (2.0 * kPi), m * dtheta);
    for (int n = 0; n <= N; ++n) {
      const double E = eigenvalue(n, m, cfg);
      const cplx term = angular * rx[static_cast<std::size_t>(n)] * ry[static_cast<std::size_t>(n)] *
                        std::exp(cplx(-E * decay_per_energy, -E * t / cfg.alpha));
      terms.push_back(term);
      if (n == N) last_shell += std::abs(term);
    }
  }
  SpectralValue out;
  out.value = detail::pairwise_sum<cplx>(terms);
  out.tail_estimate = std::abs(out.value) > 0.0 ? last_shell / std::abs(out.value) : last_shell;
  if (out.tail_estimate > trunc.tolerance) {
    throw Error(ErrorKind::TruncationInsufficient,
                "last retained shell n = " + std::to_string(N) + " has relative weight " +
                    format_double(out.tail_estimate));
  }
  return out;
}

}  // namespace abho
