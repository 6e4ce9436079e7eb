#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <utility>

#include "abho/errors.hpp"

namespace abho {

using cplx = std::complex<double>;

// Planar vector; used for positions, momenta and frequency-scaled vectors alike.
struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x1 += o.x1; x2 += o.x2; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x1 -= o.x1; x2 -= o.x2; return *this; }
  constexpr Vec2& operator*=(double s) { x1 *= s; x2 *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x1, -a.x2}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x1, s * a.x2}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x1 / s, a.x2 / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 u, Vec2 v) { return u.x1 * v.x1 + u.x2 * v.x2; }
constexpr double wedge(Vec2 u, Vec2 v) { return u.x1 * v.x2 - u.x2 * v.x1; }
double norm(Vec2 u);
bool is_finite(Vec2 u);

using CVec2 = std::array<cplx, 2>;

// Row-major 2x2 complex matrix.
class ComplexMat2 {
 public:
  constexpr ComplexMat2() = default;
  constexpr ComplexMat2(cplx a11, cplx a12, cplx a21, cplx a22) : e_{a11, a12, a21, a22} {}

  static constexpr ComplexMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr ComplexMat2 scalar(cplx s) { return {s, 0.0, 0.0, s}; }

  cplx operator()(int i, int j) const { return e_[static_cast<std::size_t>(2 * i + j)]; }
  cplx& operator()(int i, int j) { return e_[static_cast<std::size_t>(2 * i + j)]; }

  cplx det() const { return e_[0] * e_[3] - e_[1] * e_[2]; }
  cplx trace() const { return e_[0] + e_[3]; }
  ComplexMat2 transpose() const { return {e_[0], e_[2], e_[1], e_[3]}; }
  ComplexMat2 adjoint() const;
  // Throws SingularMatrix when det is exactly zero or not finite.
  ComplexMat2 inverse() const;
  // Roots of the characteristic polynomial, principal square root; the "+" root first.
  std::pair<cplx, cplx> eigenvalues() const;
  double max_abs() const;
  bool is_finite() const;

  friend ComplexMat2 operator+(const ComplexMat2& a, const ComplexMat2& b);
  friend ComplexMat2 operator-(const ComplexMat2& a, const ComplexMat2& b);
  friend ComplexMat2 operator*(const ComplexMat2& a, const ComplexMat2& b);
  friend ComplexMat2 operator*(cplx s, const ComplexMat2& a);
  friend CVec2 operator*(const ComplexMat2& a, const CVec2& v);

 private:
  std::array<cplx, 4> e_{};
};

// Row vector times matrix: (u^T M)_j = sum_i u_i M_ij.
CVec2 left_multiply(Vec2 u, const ComplexMat2& m);
ComplexMat2 real_matrix(double a11, double a12, double a21, double a22);

struct Config {
  double alpha = 0.1;
  double flux_b = 0.0;
  double omega = 1.0;
  double damping_B = 1.0;
  double cutoff_eps = 0.1;
  int order_N = 0;

  friend bool operator==(const Config&, const Config&) = default;
};

// Returns cfg unchanged or throws InvalidParameter / NotImplemented.
Config validate_config(const Config& cfg);

struct PhasePoint {
  Vec2 y;
  Vec2 eta;
};

// |y^eta - b| <= 1e-12 * max(1, |y||eta|)
bool on_collision_manifold(const PhasePoint& p, const Config& cfg);

// Flat key=value config file; '#' starts a comment line. Missing keys keep their defaults.
Config parse_config(std::istream& in);
Config parse_config_string(const std::string& text);
Config read_config_file(const std::string& path);
std::string format_config(const Config& cfg);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

}  // namespace abho
