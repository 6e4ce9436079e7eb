#pragma once

#include <span>
#include <vector>

#include "abho/kernel.hpp"
#include "time_angle.hpp"

namespace abho::detail {

// exp(i phi/alpha) u0 as a function of eta for fixed (t, x, y).
struct KernelIntegrand {
  KernelIntegrand(double t, Vec2 x, Vec2 y, const Config& cfg);
  cplx operator()(Vec2 eta) const;

  Config cfg;
  TimeAngle a;
  Vec2 y;
  Vec2 x;
  Vec2 ay;
  double theta_y = 0.0;
  double y_norm = 0.0;
  double inv_alpha = 0.0;
};

struct GridPlan {
  Vec2 center;
  double radius = 0.0;
  double sigma = 0.0;
  int intervals = 0;  // (intervals + 1)^2 nodes
};

struct AdaptiveKernel {
  KernelSample sample;
  GridPlan plan;  // the accepted (finest) node set
};

GridPlan plan_grid(double t, Vec2 x, Vec2 y, const Config& cfg, const QuadratureSpec& q);
std::vector<cplx> evaluate_nodes(const KernelIntegrand& f, const GridPlan& g);
cplx grid_integral(std::span<const cplx> vals, const GridPlan& g);
AdaptiveKernel kernel_adaptive(double t, Vec2 x, Vec2 y, const Config& cfg, const QuadratureSpec& q);

}  // namespace abho::detail
