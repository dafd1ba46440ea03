#pragma once

#include <vector>

#include "conewave/cone_geometry.hpp"
#include "conewave/special_functions.hpp"

namespace conewave {

enum class FrontRegion { before_direct, between_fronts, after_diffracted, near_front };
const char* front_region_name(FrontRegion r) noexcept;

struct KernelQuery {
  double t = 1.0;
  ConePoint q1, q2;
  double h = 0.0;  // 0: unmollified
};

struct KernelValue {
  cplx value;
  FrontRegion region;
};

// Lengths of the direct (geometric) geodesics q1 -> q2 on C_alpha; several
// for alpha < 2*pi, none when the angular separation exceeds pi.
std::vector<double> direct_front_times(double alpha, const ConePoint& q1, const ConePoint& q2);
FrontRegion classify_region(double alpha, const KernelQuery& q, double tol);

// Sine kernel on C_{4 pi}; h = 0 exact (throws OnFront within 1e-12 of a
// front), h > 0 convolved with the Gaussian in t.
KernelValue sine_kernel_4pi_closed(const KernelQuery& q);
// (1/2pi)(t^2 - d^2)^{-1/2} on the plane, mollified when h > 0.
KernelValue sine_kernel_plane(const KernelQuery& q);

// Bessel mode sum; mode_cut <= 0 selects the cutoff automatically. h > 0 required.
KernelValue sine_kernel_cheeger_series(double alpha, const KernelQuery& q, int mode_cut = 0);
std::vector<double> sine_kernel_cheeger_series_sweep(double alpha, const std::vector<double>& ts,
                                                     const ConePoint& q1, const ConePoint& q2,
                                                     double h, int mode_cut = 0);

struct FriedlanderGridSpec {
  double y_min = -1.5;
  double y_max = 6.0;
  double hy = 1e-3;
  int nz = 512;
  int translates = 20;  // |k| <= translates, analytic tail beyond
};

struct FriedlanderGrid {
  double alpha = 4 * pi;
  FriedlanderGridSpec spec;
  int ny = 0, nz = 0;
  double hz = 0.0, z0 = 0.0;
  std::vector<double> G;    // z-major: G[iz * ny + iy]
  std::vector<double> A1G;  // half derivative in y, kernel |y - y'|^{-1/2}

  double y_at(int iy) const { return spec.y_min + iy * spec.hy; }
  double z_at(int iz) const { return z0 + iz * hz; }
};

// Friedlander's function on one sheet and its alpha-periodisation.
double friedlander_G(double y, double z);
double friedlander_G_alpha(double alpha, double y, double z, int translates = 20);

FriedlanderGrid build_friedlander(double alpha, const FriedlanderGridSpec& spec = {});
KernelValue sine_kernel_friedlander(const FriedlanderGrid& fg, const KernelQuery& q);

// C_{4 pi} only: roots of r1(s) + r2(s) = t for the vertex moved along the cut line.
KernelValue sine_kernel_moving_point(const KernelQuery& q, int eps = -1);

cplx spherical_wave_l(int j, double t, const ConePoint& q, const Mollifier& m);
double upsilon0(double t, const ConePoint& q1, const ConePoint& q2, double dir_theta,
                const Mollifier& m);

// Half-wave kernel near the diffracted front on C_{4 pi}: the (s, omega)
// integral with exp(-h^2 omega^2 / 2) inserted; the omega integral is closed form.
cplx halfwave_mu_4pi(double t, const ConePoint& q1, const ConePoint& q2, const Mollifier& m);

// Leading half-wave amplitude (coefficient of omega at s = 0); theta's are
// chart angles.
cplx hw_leading_amplitude(double alpha, int eps, const ConePoint& q1, const ConePoint& q2);

} // namespace conewave
