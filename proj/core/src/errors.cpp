#include "abho/errors.hpp"

namespace abho {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NotImplemented: return "NotImplemented";
    case ErrorKind::OriginSingularity: return "OriginSingularity";
    case ErrorKind::OriginCollision: return "OriginCollision";
    case ErrorKind::NearOriginAbort: return "NearOriginAbort";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::CollisionManifold: return "CollisionManifold";
    case ErrorKind::StepRefinementFailed: return "StepRefinementFailed";
    case ErrorKind::NonDecayingPhase: return "NonDecayingPhase";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorKind::TrajectoryHitsOrigin: return "TrajectoryHitsOrigin";
    case ErrorKind::CutoffInterference: return "CutoffInterference";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorKind::ZeroAtEndpoint: return "ZeroAtEndpoint";
    case ErrorKind::StationaryPointOutsideSupport: return "StationaryPointOutsideSupport";
    case ErrorKind::InconsistentAction: return "InconsistentAction";
    case ErrorKind::OverflowGuard: return "OverflowGuard";
    case ErrorKind::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace abho
