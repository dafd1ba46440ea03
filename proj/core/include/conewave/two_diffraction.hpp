#pragma once

#include <array>
#include <functional>
#include <vector>

#include "conewave/cone_geometry.hpp"
#include "conewave/special_functions.hpp"

namespace conewave {

struct CompositionPoint {
  ConeChain chain;
  PlanarPoint q1, q2;  // chain frame
  double s1 = 0.0, s2 = 0.0;
  double omega1 = 1.0, omega2 = 1.0;
  double t = 3.0;
  double t0 = 0.0;  // <= 0 selects a + b/2

  double split_time() const { return t0 > 0 ? t0 : chain.a + 0.5 * chain.b; }
};

CompositionPoint default_composition(const ConeChain& chain, double omega);

struct StationaryData {
  PlanarPoint q_c;
  double A = 0, B = 0, C = 0;
  double omega = 0;
  double hessian_det = 0;
  int signature = 0;
  PlanarPoint P1, P2;  // shifted vertices
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

// p_i(s) = p_i + (0, -eps_i s), i in {1, 2}
PlanarPoint shifted_vertex(const ConeChain& chain, int which, double s);

double phase_phi2(const CompositionPoint& cp, const PlanarPoint& q);
double phase_phi1(const CompositionPoint& cp, const PlanarPoint& q);
StationaryData stationary_eliminate(const CompositionPoint& cp);

// Hessian of phi1 + phi2 in (x along the segment, y across it, omega2).
Matrix3 composition_hessian(double dxx, double C, double omega);
int matrix_signature(const Matrix3& m, std::array<double, 3>* eigenvalues = nullptr);

double composed_phase_psi(const ConeChain& chain, double t, const PlanarPoint& q1,
                          const PlanarPoint& q2, double s1, double s2, double omega);

// Polar coordinates about p_i with the eps_i-oriented angle atan2(eps_i y, x - x_i).
struct ChainPolar {
  double r, theta;
};
ChainPolar chain_polar(const ConeChain& chain, int which, const PlanarPoint& q);

cplx amplitude_tilde(const ConeChain& chain, double t, const PlanarPoint& q1,
                     const PlanarPoint& q2, double omega);
cplx principal_symbol_lambda0(const ConeChain& chain, double theta1, double theta2, double omega);
inline constexpr const char* kPrincipalSymbolHalfDensity = "|dr1 dtheta1 dtheta2 domega|^{1/2}";

struct NondegeneracyReport {
  double sigma_min = 0.0;
  bool pass = false;
  int rows = 0, cols = 0;
};

// phase(z, theta): z the base variables, theta the fibre parameters. Rows are
// d(d phi / d theta_k) over (z, theta), by mixed central differences with
// one Richardson step.
using PhaseFunction = std::function<double(const std::vector<double>&, const std::vector<double>&)>;
NondegeneracyReport nondegeneracy_check(const PhaseFunction& phase, const std::vector<double>& z,
                                        const std::vector<double>& theta, double step = 1e-4,
                                        double threshold = 1e-6);
// phi_eps = omega (|q1 - p_eps(s)| + |q2 - p_eps(s)| - t) at s = 0, t on the diffracted front.
NondegeneracyReport nondegeneracy_pair(int eps, const PlanarPoint& q1, const PlanarPoint& q2,
                                       double omega);
// Psi with parameters (s1, s2, omega) at s = 0, t on the twice-diffracted front.
NondegeneracyReport nondegeneracy_system(const ConeChain& chain, const PlanarPoint& q1,
                                         const PlanarPoint& q2, double omega);

enum class FrontKind { lambda0, lambda1, lambda2, lambda3 };
struct FrontPoint {
  double s1 = 0, s2 = 0;
  double t_stationary = 0;  // critical value of the s-restricted Psi / omega + t
  double t_explicit = 0;    // level set written geometrically
};
FrontPoint stationary_front(const ConeChain& chain, const PlanarPoint& q1, const PlanarPoint& q2,
                            FrontKind kind);

// Leading amplitude of one diffraction, without its omega factor, for the
// endpoints a, b of cone `which` (chart angles, vertex shifted by s).
cplx cone_amplitude(const ConeChain& chain, int which, double s, const PlanarPoint& a,
                    const PlanarPoint& b);

cplx stationary_phase_value(const CompositionPoint& cp, bool unit_amplitude = false);

struct OracleOptions {
  bool unit_amplitude = false;
  double sigma_tau = 0.5;        // Gaussian window in omega2 / omega1
  double phi_half_width = 0.9;   // angular bump about the segment direction
  double rel_tol = 1e-8;
  int max_level = 6;
};
struct OracleResult {
  cplx value;
  int level = 0;
  double last_change = 0.0;
};
OracleResult oscillatory_oracle(const CompositionPoint& cp, const OracleOptions& opt = {});

} // namespace conewave
