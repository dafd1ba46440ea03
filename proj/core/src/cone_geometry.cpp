#include "conewave/cone_geometry.hpp"

#include <cmath>

#include "conewave/errors.hpp"

namespace conewave {

const char* ray_class_name(RayClass c) noexcept {
  switch (c) {
    case RayClass::direct: return "direct";
    case RayClass::geometric_diffractive: return "geometric_diffractive";
    case RayClass::nongeometric_diffractive: return "nongeometric_diffractive";
  }
  return "unknown";
}

double reduce_angle(double alpha, double theta) {
  double t = std::fmod(theta, alpha);
  if (t < 0) t += alpha;
  if (t >= alpha) t = 0.0;  // fmod rounding at -0 / alpha
  return t;
}

ConePoint make_cone_point(double alpha, double r, double theta) {
  return {r, reduce_angle(alpha, theta)};
}

double angular_separation(double alpha, double theta1, double theta2) {
  double d = reduce_angle(alpha, std::abs(theta1 - theta2));
  return std::min(d, alpha - d);
}

double cone_distance(double alpha, const ConePoint& q1, const ConePoint& q2) {
  if (q2.r == 0.0) return q1.r;
  if (q1.r == 0.0) return q2.r;
  double dth = angular_separation(alpha, q1.theta, q2.theta);
  if (dth > pi) return q1.r + q2.r;
  double d2 = q1.r * q1.r + q2.r * q2.r - 2 * q1.r * q2.r * std::cos(dth);
  return std::sqrt(std::max(d2, 0.0));
}

ChartWindow chart_window(int eps) {
  if (eps > 0) return {-1.5 * pi, 0.5 * pi};
  return {-0.5 * pi, 1.5 * pi};
}

double chart_angle(double alpha, int eps, double theta, double margin) {
  auto w = chart_window(eps);
  double centre = 0.5 * (w.lo + w.hi);
  double k = std::round((centre - theta) / alpha);
  double th = theta + k * alpha;
  if (th <= w.lo + margin || th >= w.hi - margin)
    throw Error(Errc::PointOnCut, "angle " + std::to_string(theta) +
                                      " is on or beyond the chart cut");
  return th;
}

PlanarPoint develop(double alpha, int eps, double /*r_star*/, const ConePoint& q,
                    double margin) {
  if (q.r == 0.0) return {0.0, 0.0};
  double th = chart_angle(alpha, eps, q.theta, margin);
  return {q.r * std::cos(th), q.r * std::sin(th)};
}

ShiftedPolar shifted_vertex_coords(const PlanarPoint& q, int eps, double s) {
  double dx = q.x, dy = q.y + eps * s;
  double r = std::hypot(dx, dy);
  if (r == 0.0) throw Error(Errc::DegeneratePoint, "point coincides with shifted vertex");
  double th = std::atan2(dy, dx);
  auto w = chart_window(eps);
  if (th >= w.hi) th -= 2 * pi;
  if (th <= w.lo) th += 2 * pi;
  return {r, th};
}

RayClass classify_ray(double alpha, double delta_theta, double tol) {
  double d = angular_separation(alpha, delta_theta, 0.0);
  if (std::abs(d - pi) < tol) return RayClass::geometric_diffractive;
  if (d > pi) return RayClass::nongeometric_diffractive;
  return RayClass::direct;
}

void validate_chain(const ConeChain& ch) {
  if (!(ch.a > 0 && ch.b > 0 && ch.c > 0))
    throw Error(Errc::InvalidArgument, "chain legs must be positive");
  if (!(ch.alpha1 > 0 && ch.alpha2 > 0))
    throw Error(Errc::InvalidArgument, "cone angles must be positive");
  if (std::abs(ch.eps1) != 1 || std::abs(ch.eps2) != 1)
    throw Error(Errc::InvalidArgument, "diffraction signs must be +1 or -1");
}

ChainFrame chain_frame(const ConeChain& ch) {
  validate_chain(ch);
  ChainFrame f;
  f.q2_star = {-ch.a, 0.0};
  f.p2 = {0.0, 0.0};
  f.p1 = {ch.b, 0.0};
  f.q1_star = {ch.b + ch.c, 0.0};
  f.cut2 = {f.p2, {0.0, double(ch.eps2)}};
  f.cut1 = {f.p1, {0.0, double(ch.eps1)}};
  return f;
}

double distance(const PlanarPoint& p, const PlanarPoint& q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

} // namespace conewave
