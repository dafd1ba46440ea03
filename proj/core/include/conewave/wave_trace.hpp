#pragma once

#include <vector>

#include "conewave/special_functions.hpp"

namespace conewave {

struct Spectrum {
  std::vector<double> frequencies;  // sorted
  std::vector<int> multiplicities;
  double lambda_max = 0.0;
};

struct TracePrediction {
  double L = 0.0, b = 0.0;
  double order = -1.0;
  cplx coefficient;
};

// Doubled a x b rectangle: flat sphere with four cone points of angle pi.
struct PillowcaseSurface {
  double a = 1.0, b = 1.0;
  double area() const { return 2 * a * b; }
};

TracePrediction predict_two_diffraction_singularity(double L, double b);

// lambda = pi sqrt(m^2/a^2 + n^2/b^2), one entry per (m, n); multiplicity 2
// when m, n >= 1 (Neumann cos cos plus Dirichlet sin sin), else 1.
Spectrum pillowcase_spectrum(const PillowcaseSurface& s, double lambda_max);
// Closed geodesic lengths 2 sqrt(m^2 a^2 + n^2 b^2) <= tmax, (m, n) != (0, 0).
std::vector<double> pillowcase_lengths(const PillowcaseSurface& s, double tmax);

long long counting_function(const Spectrum& s, double lambda);
double weyl_count(double area, double lambda);

// sum_j mult_j exp(-i t lambda_j) exp(-h^2 lambda_j^2 / 2), pairwise summed.
std::vector<cplx> mollified_trace(const Spectrum& s, const std::vector<double>& ts, const Mollifier& m);

struct Peak {
  double t = 0.0, height = 0.0, prominence = 0.0;
};
// Local maxima of |values| whose topographic prominence exceeds min_prominence.
std::vector<Peak> detect_peaks(const std::vector<double>& ts, const std::vector<double>& mag,
                               double min_prominence);

struct SingularityFit {
  cplx coefficient;
  double residual_ratio = 1.0;
  bool valid = false;
  int samples = 0;
};

// Least squares fit of c * mollified_inverse_power over |t - L| <= 6h.
// Throws WindowContaminated when another length lies within 10h of L.
SingularityFit extract_singularity_coefficient(const std::vector<double>& ts,
                                               const std::vector<cplx>& values, double L, double h,
                                               double order,
                                               const std::vector<double>& other_lengths = {});

struct TracePipelineReport {
  double L = 0, b = 0;
  double psi_uu_fd = 0, psi_uu_exact = 0;  // at omega
  double hessian_identity_err = 0;         // |psi_uu b (L-b) / L - omega| / omega
  double psi_yy_fd = 0, psi_yy_exact = 0;  // at the mid-leg sample
  double limit_incoming = 0, limit_outgoing = 0;
  cplx A_over_omega;        // symbol after the y stationary phase, divided by omega
  double A_x_spread = 0;    // relative variation of A over x samples
  cplx omega_integrand;     // i A / psi_uu
  cplx coefficient;         // pipeline
  cplx coefficient_formula;
  double rel_err = 0;
  bool pass = false;
};
TracePipelineReport trace_pipeline_check(double L, double b, double omega = 1.0);

} // namespace conewave
