#include "conewave/errors.hpp"

namespace conewave {

const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::PointOnCut: return "PointOnCut";
    case Errc::DegeneratePoint: return "DegeneratePoint";
    case Errc::NonUniformGrid: return "NonUniformGrid";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::NotConvex: return "NotConvex";
    case Errc::ModeTailTooLarge: return "ModeTailTooLarge";
    case Errc::OutOfGrid: return "OutOfGrid";
    case Errc::TangentRoot: return "TangentRoot";
    case Errc::OnFront: return "OnFront";
    case Errc::GeometricDirection: return "GeometricDirection";
    case Errc::DegenerateDistance: return "DegenerateDistance";
    case Errc::NoInteriorCriticalPoint: return "NoInteriorCriticalPoint";
    case Errc::BadLeg: return "BadLeg";
    case Errc::WindowContaminated: return "WindowContaminated";
    case Errc::IncompleteSpectrum: return "IncompleteSpectrum";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

} // namespace conewave
