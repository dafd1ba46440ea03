#include "conewave/diffraction.hpp"

#include <cmath>
#include <numbers>

#include "conewave/errors.hpp"

namespace conewave {

namespace {

constexpr double kPi = std::numbers::pi;

double numerator(double alpha) {
  double s = std::sin(2 * kPi * kPi / alpha);
  return std::abs(s) < 1e-13 ? 0.0 : s;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void check_alpha(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha))
    throw Error(Errc::InvalidArgument, "cone angle must be positive");
}

} // namespace

ScatteringEvaluation scattering_matrix(double alpha, double theta) {
  check_alpha(alpha);
  ScatteringEvaluation ev{alpha, theta, 0.0, false};
  const double num = numerator(alpha);
  if (num == 0.0) return ev;
  const double d1 = std::sin(kPi / alpha * (kPi - theta));
  const double d2 = std::sin(kPi / alpha * (kPi + theta));
  if (std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12) {
    ev.is_pole = true;
    ev.value = std::copysign(HUGE_VAL, -num * d1 * d2);
    return ev;
  }
  ev.value = -num / (2 * alpha) / (d1 * d2);
  return ev;
}

double scattering_4pi(double theta) { return -1.0 / (4 * kPi * std::cos(theta / 2)); }

cplx scattering_matrix_fourier(double alpha, double theta, int N, bool cesaro) {
  check_alpha(alpha);
  if (N < 0) throw Error(Errc::InvalidArgument, "N must be nonnegative");
  // pair +k and -k: 2 e^{-i pi nu} cos(nu theta), nu = 2 pi k / alpha
  cplx sum = 1.0;
  for (int k = N; k >= 1; --k) {
    const double nu = 2 * kPi * k / alpha;
    const double w = cesaro ? 1.0 - double(k) / double(N + 1) : 1.0;
    sum += w * 2.0 * std::polar(1.0, -kPi * nu) * std::cos(nu * theta);
  }
  return cplx(0.0, -1.0 / alpha) * sum;
}

double gtd_amplitude(double alpha, double r1, double r2, double theta) {
  if (!(r1 > 0 && r2 > 0)) throw Error(Errc::InvalidArgument, "radii must be positive");
  auto s = scattering_matrix(alpha, theta);
  if (s.is_pole) throw Error(Errc::GeometricDirection, "theta is a pole of S_alpha");
  return s.value / (2 * kPi * std::sqrt(r1 * r2));
}

double regularized_sine_product(double /*alpha*/, SineProduct which) {
  return which == SineProduct::incoming_at_0 ? 1.0 / (2 * kPi) : -1.0 / (2 * kPi);
}

double sine_scattering_product(double alpha, SineProduct which, double theta) {
  check_alpha(alpha);
  const double num = numerator(alpha);
  if (num == 0.0) return 0.0;
  double q, other;
  if (which == SineProduct::incoming_at_0) {
    // sin(th) / sin(-pi th / alpha) = -(alpha/pi) sinc(th) / sinc(pi th / alpha)
    q = -(alpha / kPi) * sinc(theta) / sinc(kPi * theta / alpha);
    other = std::sin(kPi / alpha * (2 * kPi + theta));
  } else {
    const double e = kPi - theta;
    q = (alpha / kPi) * sinc(e) / sinc(kPi * e / alpha);
    other = std::sin(kPi / alpha * (2 * kPi - e));
  }
  if (std::abs(other) < 1e-12 || !std::isfinite(q))
    throw Error(Errc::GeometricDirection, "uncancelled pole of S_alpha");
  return -num / (2 * alpha) * q / other;
}

double scattering_times_cos_half(double alpha, double delta) {
  check_alpha(alpha);
  const double num = numerator(alpha);
  if (num == 0.0) return 0.0;
  const double ep = kPi - delta, em = kPi + delta;
  // cos(delta/2) = sin(e/2) for either e; pair it with the nearer vanishing factor
  double ratio, other;
  if (std::abs(ep) <= std::abs(em)) {
    ratio = alpha / (2 * kPi) * sinc(ep / 2) / sinc(kPi * ep / alpha);
    other = std::sin(kPi / alpha * em);
  } else {
    ratio = alpha / (2 * kPi) * sinc(em / 2) / sinc(kPi * em / alpha);
    other = std::sin(kPi / alpha * ep);
  }
  if (std::abs(other) < 1e-12 || !std::isfinite(ratio))
    throw Error(Errc::GeometricDirection, "S_alpha pole not cancelled by cos(delta/2)");
  return -num / (2 * alpha) * ratio / other;
}

double diffraction_coefficient_reg(double alpha, double ta, double tb) {
  return 2.0 * std::sin(0.5 * (ta + tb)) * scattering_times_cos_half(alpha, ta - tb);
}

} // namespace conewave
