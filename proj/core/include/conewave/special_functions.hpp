#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace conewave {

using cplx = std::complex<double>;

// Gaussian time mollifier of standard deviation h; frequency profile exp(-h^2 w^2 / 2).
struct Mollifier {
  double h = 0.05;
  explicit Mollifier(double width = 0.05);
  double damping(double omega) const;
};

struct SampledFunction1D {
  std::vector<double> grid;
  std::vector<double> values;
};

double bessel_j(double nu, double x);

// J_{nu0 + k}(x) for k = 0..n-1, Miller backward recurrence normalised
// against two directly evaluated orders.
std::vector<double> bessel_j_sequence(double nu0, int n, double x);

enum class HalfDerivativeMethod { convolution, spectral };

// Riemann-Liouville half derivative (1/Gamma(1/2)) int_{-inf}^y f'(s) (y-s)^{-1/2} ds.
// `convolution` treats f as piecewise linear (L1 scheme, exact on ramps) and
// assumes f vanishes to the left of the grid; `spectral` multiplies by
// (i xi)^{1/2} after zero padding.
SampledFunction1D half_derivative(const SampledFunction1D& f,
                                  HalfDerivativeMethod m = HalfDerivativeMethod::convolution);
// Uniform-grid kernel on raw samples (step dy); same semantics as above.
std::vector<double> half_derivative_uniform(const std::vector<double>& f, double dy,
                                            HalfDerivativeMethod m = HalfDerivativeMethod::convolution);

double mollified_delta(const Mollifier& m, double u);

// Gaussian smoothing of (t - L - i0)^order, order in {-1, -1/2}.
cplx mollified_inverse_power(const Mollifier& m, double t, double L, double order);

// Zeros of a convex g on [lo, hi]: minimum first, then one bracket per side.
std::vector<double> find_roots_convex(const std::function<double(double)>& g, double lo,
                                      double hi, int samples = 64);

double dawson(double x);

} // namespace conewave
