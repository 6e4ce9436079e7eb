#pragma once

#include <utility>

#include "abho/model.hpp"

namespace abho {

struct ZValue {
  ComplexMat2 z;
  cplx det_z;
  cplx sqrt_det_z;      // continuous branch with arg det Z = 0 at t = 0
  double arg_lift_det = 0.0;
};

// Z = xi^t_eta - i B x^t_eta
ComplexMat2 z_matrix(double t, const PhasePoint& p, const Config& cfg);
cplx det_z_closed(double t, const PhasePoint& p, const Config& cfg);
// mu = cos(wt) - i B sin(wt)/w +- b sin(wt)/(w |x^t|^2), "+" first
std::pair<cplx, cplx> z_eigenvalues(double t, const PhasePoint& p, const Config& cfg);

// Walks s over [0, t] and unwraps arg det Z(s); dt_track <= 0 selects min(0.01/w, t/64).
ZValue sqrt_det_z_tracked(double t, const PhasePoint& p, const Config& cfg, double dt_track = 0.0);
// Same branch from the eigenvalue closed form, no sampling.
ZValue sqrt_det_z_branch(double t, const PhasePoint& p, const Config& cfg);

}  // namespace abho
