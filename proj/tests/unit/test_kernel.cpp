#include <doctest.h>

#include "oracles.hpp"

using namespace abho;
using abho::testing::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;

// Large damping and a small cutoff keep the Gaussian eta-support clear of the cutoff region.
const Config kFree{0.1, 0.0, 1.0, 20.0, 0.01, 0};

}  // namespace

TEST_CASE("cutoff profile") {
  const double eps = 0.2;
  CHECK(cutoff({0.5 * eps, 0}, eps) == 0.0);
  CHECK(cutoff({0, 0}, eps) == 0.0);
  CHECK(cutoff({3 * eps, 0}, eps) == 1.0);
  CHECK(cutoff({0, 2 * eps}, eps) == 1.0);
  const double mid = cutoff({1.5 * eps, 0}, eps);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  CHECK(mid == doctest::Approx(0.5).epsilon(1e-12));
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double r = eps * (0.9 + 1.2 * i / 1000.0);
    const double v = cutoff({0, r}, eps);
    CHECK(v >= prev);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("symbol u0 examples") {
  const Config cfg{0.1, 0.3, 1.0, 1.0, 0.1, 0};
  CHECK(symbol_u0(0.0, {{1, 0}, {0.2, 1}}, cfg) == cplx(1.0));
  CHECK(symbol_u0(1.0, {{0.05, 0}, {0.2, 1}}, cfg) == cplx(0.0));
  // collision manifold trajectory evaluated just before it reaches the origin
  const PhasePoint c{{1, 0}, {-0.5, 0.3}};
  const double tc = *collision_time(c, cfg);
  CHECK(norm(flow(tc - 0.01, c, cfg).x) < cfg.cutoff_eps);
  CHECK(symbol_u0(tc - 0.01, c, cfg) == cplx(0.0));
  const PhasePoint p{{1, 0.2}, {0.3, 0.9}};
  CHECK(std::abs(symbol_u0(2.0, p, cfg) - sqrt_det_z_branch(2.0, p, cfg).sqrt_det_z) < 1e-14);
}

TEST_CASE("quadrature spec validation") {
  CHECK_THROWS_AS(validate_quadrature({0.0, 8, 2048, 1e-6}), Error);
  CHECK_THROWS_AS(validate_quadrature({1e-10, 3, 2048, 1e-6}), Error);
  CHECK_THROWS_AS(validate_quadrature({1e-10, 8, 16, 1e-6}), Error);
  CHECK_THROWS_AS(validate_quadrature({1e-10, 8, 2048, -1.0}), Error);
}

TEST_CASE("kernel_u0 reproduces the Mehler kernel at b = 0") {
  const std::pair<Vec2, Vec2> pairs[] = {{{0.5, 1}, {1, 0}}, {{-1.2, 0.4}, {0.3, -0.9}}, {{1.5, 1.0}, {-0.7, 0.6}}};
  for (const double t : {0.7, 1.0, 2.5}) {
    for (const auto& [x, y] : pairs) {
      const KernelSample k = kernel_u0(t, x, y, kFree);
      const cplx m = mehler_kernel(t, x, y, kFree);
      CHECK(rel_err(k.value, m) < 1e-6);
      CHECK(k.est_error >= 0.0);
      CHECK(k.n_points > 0);
    }
  }
}

TEST_CASE("kernel_u0 guards") {
  try {
    kernel_u0(kPi, {1, 0}, {0, 1}, kFree);
    FAIL("expected NonDecayingPhase");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonDecayingPhase);
  }
  CHECK(kernel_u0(1.0, {1, 0}, {0.005, 0}, kFree).value == cplx(0.0));
}

TEST_CASE("quadrature refinement and cutoff neutrality") {
  const Config cfg{0.1, 0.05, 1.0, 20.0, 0.01, 0};
  const Vec2 x{0.6, 1.1}, y{1.2, -0.3};
  const double t = 1.3;
  const KernelSample base = kernel_u0(t, x, y, cfg);
  QuadratureSpec dense;
  dense.osc_points_per_period = 16;
  const KernelSample fine = kernel_u0(t, x, y, cfg, dense);
  CHECK(std::abs(fine.value - base.value) < 10 * base.est_error + 1e-12 * std::abs(base.value));
  Config wider = cfg;
  wider.cutoff_eps = 0.02;
  CHECK(rel_err(kernel_u0(t, x, y, wider).value, base.value) < 1e-8);
  QuadratureSpec tighter;
  tighter.tail_tol = 1e-13;
  CHECK(rel_err(kernel_u0(t, x, y, cfg, tighter).value, base.value) < 2e-10);
}

TEST_CASE("kernel_grid ordering, symmetry and thread determinism") {
  const Vec2 y{1, 0};
  const double t = 1.0;
  CHECK(kernel_grid(t, {}, y, kFree).empty());
  const Vec2 one[] = {{0.4, 0.9}};
  const auto single = kernel_grid(t, one, y, kFree);
  REQUIRE(single.size() == 1);
  REQUIRE(single[0].sample.has_value());
  CHECK(single[0].sample->value == kernel_u0(t, one[0], y, kFree).value);

  const auto xs = make_grid({-1.0, 1.0, 4, -1.0, 1.0, 5});
  REQUIRE(xs.size() == 20);
  CHECK(xs[0] == Vec2{-1.0, -1.0});
  CHECK(xs[1] == Vec2{-1.0, -0.5});
  CHECK(xs[5] == Vec2{-1.0 + 2.0 / 3.0, -1.0});
  const auto serial = kernel_grid(t, xs, y, kFree, {}, 1);
  const auto threaded = kernel_grid(t, xs, y, kFree, {}, 3);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    REQUIRE(serial[i].sample.has_value());
    CHECK(serial[i].sample->value == threaded[i].sample->value);
    CHECK(serial[i].x == xs[i]);
  }
  // reflection x2 -> -x2 with y on the axis
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 5; ++j) {
      const cplx a = serial[static_cast<std::size_t>(5 * i + j)].sample->value;
      const cplx b = serial[static_cast<std::size_t>(5 * i + 4 - j)].sample->value;
      CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
    }
  }
}

TEST_CASE("kernel_grid records per-sample errors") {
  const Vec2 xs[] = {{1, 0}, {0.5, 0.5}};
  const auto rows = kernel_grid(kPi, xs, {0, 1}, kFree);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK_FALSE(r.sample.has_value());
    REQUIRE(r.error.has_value());
    CHECK(r.error->kind() == ErrorKind::NonDecayingPhase);
  }
}

TEST_CASE("pde residual at b = 0 sits at the stencil floor and converges") {
  const Vec2 x{0.8, 0.7}, y{1.0, -0.4};
  const double t = 1.1;
  const ResidualValue r1 = pde_residual(t, x, y, kFree, {}, 1e-4, 4e-3);
  const ResidualValue r2 = pde_residual(t, x, y, kFree, {}, 5e-5, 2e-3);
  CHECK(r1.relative < 1e-3);
  CHECK(r2.relative < r1.relative);
  CHECK(rel_err(r1.kernel, mehler_kernel(t, x, y, kFree)) < 1e-6);
  CHECK_THROWS_AS(pde_residual(t, {1e-3, 0}, y, kFree, {}, 1e-4, 1e-3), Error);
}
