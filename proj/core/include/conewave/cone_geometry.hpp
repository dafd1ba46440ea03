#pragma once

// Flat cone C_alpha = (0,inf) x (R / alpha Z), metric dr^2 + r^2 dtheta^2.

#include <numbers>

namespace conewave {

inline constexpr double pi = std::numbers::pi;

struct ConePoint {
  double r = 0.0;
  double theta = 0.0;
};

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};

// Diffraction-angle sign and the shift of the vertex along the cut line.
struct ShiftFrame {
  int epsilon = 1;
  double s = 0.0;
};

// q2 -(a)-> p2 -(b)-> p1 -(c)-> q1; diffraction angle at p_i is eps_i * pi.
struct ConeChain {
  double a = 1.0, b = 1.0, c = 1.0;
  double alpha1 = 3 * pi, alpha2 = 3 * pi;
  int eps1 = -1, eps2 = 1;

  double total_length() const { return a + b + c; }
};

struct Ray {
  PlanarPoint base;
  PlanarPoint dir;  // unit
};

struct ChainFrame {
  PlanarPoint q1_star, q2_star, p1, p2;
  Ray cut1, cut2;
};

enum class RayClass { direct, geometric_diffractive, nongeometric_diffractive };

const char* ray_class_name(RayClass c) noexcept;

// theta mod alpha, in [0, alpha).
double reduce_angle(double alpha, double theta);
ConePoint make_cone_point(double alpha, double r, double theta);

double angular_separation(double alpha, double theta1, double theta2);
double cone_distance(double alpha, const ConePoint& q1, const ConePoint& q2);

// Chart with the ray {(0, eps*y): y > 0} removed; the base geodesic is the
// positive x-axis (theta = 0). The chart covers a sector of opening 2*pi; for
// alpha < 2*pi it wraps.
struct ChartWindow {
  double lo, hi;  // open interval of admissible chart angles
};
ChartWindow chart_window(int eps);
// Representative of theta (mod alpha) inside the chart window.
double chart_angle(double alpha, int eps, double theta, double margin = 1e-9);
PlanarPoint develop(double alpha, int eps, double r_star, const ConePoint& q,
                    double margin = 1e-9);

// Polar coordinates about p_eps(s) = (0, -eps*s), angle in the chart window.
struct ShiftedPolar {
  double r;
  double theta;
};
ShiftedPolar shifted_vertex_coords(const PlanarPoint& q, int eps, double s);

RayClass classify_ray(double alpha, double delta_theta, double tol = 1e-9);

ChainFrame chain_frame(const ConeChain& chain);
void validate_chain(const ConeChain& chain);

double distance(const PlanarPoint& p, const PlanarPoint& q);

} // namespace conewave
