#pragma once

#include "conewave/special_functions.hpp"

namespace conewave {

struct ScatteringEvaluation {
  double alpha = 0.0;
  double theta = 0.0;
  double value = 0.0;  // meaningless when is_pole
  bool is_pole = false;
};

// S_alpha(theta) = -(1/2 alpha) sin(2 pi^2/alpha) / [sin(pi(pi-theta)/alpha) sin(pi(pi+theta)/alpha)].
// The numerator is snapped to zero for alpha = 2 pi / n, where the cone does not diffract.
ScatteringEvaluation scattering_matrix(double alpha, double theta);
double scattering_4pi(double theta);

cplx scattering_matrix_fourier(double alpha, double theta, int N, bool cesaro);

double gtd_amplitude(double alpha, double r1, double r2, double theta);

enum class SineProduct { incoming_at_0, outgoing_at_pi };

// The two limits used by the trace computation: +1/(2 pi) and -1/(2 pi).
double regularized_sine_product(double alpha, SineProduct which);
// sin(theta) S(-pi - theta) (incoming) or sin(theta) S(theta) (outgoing),
// continuous through theta = 0 resp. theta = pi.
double sine_scattering_product(double alpha, SineProduct which, double theta);

// S(delta) cos(delta/2), finite at delta = +-pi.
double scattering_times_cos_half(double alpha, double delta);
// S(ta - tb) (sin ta + sin tb) through the same cancellation.
double diffraction_coefficient_reg(double alpha, double theta_a, double theta_b);

} // namespace conewave
