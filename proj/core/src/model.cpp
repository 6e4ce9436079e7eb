#include "abho/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace abho {

double norm(Vec2 u) { return std::hypot(u.x1, u.x2); }

bool is_finite(Vec2 u) { return std::isfinite(u.x1) && std::isfinite(u.x2); }

ComplexMat2 ComplexMat2::adjoint() const {
  return {std::conj(e_[0]), std::conj(e_[2]), std::conj(e_[1]), std::conj(e_[3])};
}

ComplexMat2 ComplexMat2::inverse() const {
  const cplx d = det();
  if (d == cplx(0.0) || !std::isfinite(std::abs(d))) {
    throw Error(ErrorKind::SingularMatrix, "2x2 matrix has zero determinant");
  }
  return {e_[3] / d, -e_[1] / d, -e_[2] / d, e_[0] / d};
}

std::pair<cplx, cplx> ComplexMat2::eigenvalues() const {
  const cplx half_tr = 0.5 * trace();
  const cplx half_diff = 0.5 * (e_[0] - e_[3]);
  const cplx disc = std::sqrt(half_diff * half_diff + e_[1] * e_[2]);
  return {half_tr + disc, half_tr - disc};
}

double ComplexMat2::max_abs() const {
  double m = 0.0;
  for (const auto& v : e_) m = std::max(m, std::abs(v));
  return m;
}

bool ComplexMat2::is_finite() const {
  return std::all_of(e_.begin(), e_.end(), [](cplx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

ComplexMat2 operator+(const ComplexMat2& a, const ComplexMat2& b) {
  return {a(0, 0) + b(0, 0), a(0, 1) + b(0, 1), a(1, 0) + b(1, 0), a(1, 1) + b(1, 1)};
}

ComplexMat2 operator-(const ComplexMat2& a, const ComplexMat2& b) {
  return {a(0, 0) - b(0, 0), a(0, 1) - b(0, 1), a(1, 0) - b(1, 0), a(1, 1) - b(1, 1)};
}

ComplexMat2 operator*(const ComplexMat2& a, const ComplexMat2& b) {
  return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
          a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
}

ComplexMat2 operator*(cplx s, const ComplexMat2& a) {
  return {s * a(0, 0), s * a(0, 1), s * a(1, 0), s * a(1, 1)};
}

CVec2 operator*(const ComplexMat2& a, const CVec2& v) {
  return {a(0, 0) * v[0] + a(0, 1) * v[1], a(1, 0) * v[0] + a(1, 1) * v[1]};
}

CVec2 left_multiply(Vec2 u, const ComplexMat2& m) {
  return {u.x1 * m(0, 0) + u.x2 * m(1, 0), u.x1 * m(0, 1) + u.x2 * m(1, 1)};
}

ComplexMat2 real_matrix(double a11, double a12, double a21, double a22) {
  return {a11, a12, a21, a22};
}

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

Config validate_config(const Config& cfg) {
  require_positive(cfg.alpha, "alpha");
  if (!std::isfinite(cfg.flux_b)) {
    throw Error(ErrorKind::InvalidParameter, "flux_b must be finite");
  }
  require_positive(cfg.omega, "omega");
  require_positive(cfg.damping_B, "damping_B");
  require_positive(cfg.cutoff_eps, "cutoff_eps");
  if (cfg.order_N < 0) {
    throw Error(ErrorKind::InvalidParameter, "order_N must be >= 0");
  }
  if (cfg.order_N >= 1) {
    throw Error(ErrorKind::NotImplemented, "only order_N = 0 is supported");
  }
  return cfg;
}

bool on_collision_manifold(const PhasePoint& p, const Config& cfg) {
  const double tol = 1e-12 * std::max(1.0, norm(p.y) * norm(p.eta));
  return std::abs(wedge(p.y, p.eta) - cfg.flux_b) <= tol;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v, std::chars_format::general);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidParameter, "not a finite decimal number: '" + std::string(text) + "'");
  }
  return v;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

int parse_int(std::string_view text) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorKind::InvalidParameter, "not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Config parse_config(std::istream& in) {
  Config cfg;
  std::set<std::string, std::less<>> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::InvalidParameter, "line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key(trim(body.substr(0, eq)));
    const auto value = trim(body.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw Error(ErrorKind::InvalidParameter, "duplicate key '" + key + "'");
    }
    if (key == "alpha") cfg.alpha = parse_double(value);
    else if (key == "flux_b") cfg.flux_b = parse_double(value);
    else if (key == "omega") cfg.omega = parse_double(value);
    else if (key == "damping_B") cfg.damping_B = parse_double(value);
    else if (key == "cutoff_eps") cfg.cutoff_eps = parse_double(value);
    else if (key == "order_N") cfg.order_N = parse_int(value);
    else throw Error(ErrorKind::InvalidParameter, "unknown key '" + key + "'");
  }
  return cfg;
}

Config parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

Config read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidParameter, "cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string format_config(const Config& cfg) {
  std::ostringstream out;
  out << "alpha=" << format_double(cfg.alpha) << '\n'
      << "flux_b=" << format_double(cfg.flux_b) << '\n'
      << "omega=" << format_double(cfg.omega) << '\n'
      << "damping_B=" << format_double(cfg.damping_B) << '\n'
      << "cutoff_eps=" << format_double(cfg.cutoff_eps) << '\n'
      << "order_N=" << cfg.order_N << '\n';
  return out.str();
}

}  // namespace abho
