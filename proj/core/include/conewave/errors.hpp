#pragma once

#include <stdexcept>
#include <string>

namespace conewave {

enum class Errc {
  PointOnCut,
  DegeneratePoint,
  NonUniformGrid,
  QuadratureFailure,
  NotConvex,
  ModeTailTooLarge,
  OutOfGrid,
  TangentRoot,
  OnFront,
  GeometricDirection,
  DegenerateDistance,
  NoInteriorCriticalPoint,
  BadLeg,
  WindowContaminated,
  IncompleteSpectrum,
  InvalidArgument,
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code_(c) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

} // namespace conewave
