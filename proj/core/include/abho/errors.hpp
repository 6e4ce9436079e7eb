#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace abho {

enum class ErrorKind {
  InvalidParameter,
  NotImplemented,
  OriginSingularity,
  OriginCollision,
  NearOriginAbort,
  ToleranceNotMet,
  CollisionManifold,
  StepRefinementFailed,
  NonDecayingPhase,
  QuadratureNotConverged,
  StencilOutOfDomain,
  TrajectoryHitsOrigin,
  CutoffInterference,
  NoConvergence,
  DegenerateJacobian,
  ZeroAtEndpoint,
  StationaryPointOutsideSupport,
  InconsistentAction,
  OverflowGuard,
  TruncationInsufficient,
  SingularMatrix,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace abho
