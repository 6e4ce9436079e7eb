#pragma once

#include <optional>

#include "abho/model.hpp"

namespace abho {

struct FlowState {
  Vec2 x;
  Vec2 xi;
  double t = 0.0;
};

// All four matrices are real-valued; stored complex so they compose with Z.
struct FlowJacobians {
  ComplexMat2 x_eta;
  ComplexMat2 xi_eta;
  ComplexMat2 x_y;
  ComplexMat2 xi_y;
};

// A(x) = b(-x2, x1)/|x|^2
Vec2 vector_potential(Vec2 x, const Config& cfg);
// dA_i/dx_j; symmetric and traceless with det = -b^2/|x|^4.
ComplexMat2 potential_jacobian(Vec2 x, const Config& cfg);
double hamiltonian(Vec2 x, Vec2 xi, const Config& cfg);

FlowState flow(double t, const PhasePoint& p, const Config& cfg);
FlowJacobians flow_jacobians(double t, const PhasePoint& p, const Config& cfg);

// L = y^eta - b, conserved as x^(xi - A(x)).
double angular_momentum(const PhasePoint& p, const Config& cfg);
double kinetic_angular_momentum(Vec2 x, Vec2 xi, const Config& cfg);

// First time the trajectory reaches the origin; only trajectories on the collision manifold do.
std::optional<double> collision_time(const PhasePoint& p, const Config& cfg);

// min over s in [0, t] of |x^s|, from the closed form of |x^s|^2.
double min_radius(double t, const PhasePoint& p, const Config& cfg);

// Adaptive Dormand-Prince integration of Hamilton's equations, independent of flow().
FlowState integrate_flow_ode(double t, const PhasePoint& p, const Config& cfg, double tol);

struct OdeActionResult {
  FlowState state;
  double action = 0.0;  // integral of xi.h_xi - h along the trajectory
  long steps = 0;
};
OdeActionResult integrate_action_ode(double t, const PhasePoint& p, const Config& cfg, double tol);

}  // namespace abho
