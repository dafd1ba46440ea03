#include "conewave/two_diffraction.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "conewave/diffraction.hpp"
#include "conewave/errors.hpp"

namespace conewave {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

PlanarPoint base_vertex(const ConeChain& ch, int which) {
  return which == 1 ? PlanarPoint{ch.b, 0.0} : PlanarPoint{0.0, 0.0};
}
int eps_of(const ConeChain& ch, int which) { return which == 1 ? ch.eps1 : ch.eps2; }
double alpha_of(const ConeChain& ch, int which) { return which == 1 ? ch.alpha1 : ch.alpha2; }

double checked_distance(const PlanarPoint& p, const PlanarPoint& q) {
  double d = distance(p, q);
  if (d < 1e-14) throw Error(Errc::DegenerateDistance, "coincident points in phase");
  return d;
}

} // namespace

CompositionPoint default_composition(const ConeChain& chain, double omega) {
  auto f = chain_frame(chain);
  CompositionPoint cp;
  cp.chain = chain;
  cp.q1 = f.q1_star;
  cp.q2 = f.q2_star;
  cp.omega1 = cp.omega2 = omega;
  cp.t = chain.total_length();
  return cp;
}

PlanarPoint shifted_vertex(const ConeChain& ch, int which, double s) {
  if (which != 1 && which != 2) throw Error(Errc::InvalidArgument, "cone index must be 1 or 2");
  auto p = base_vertex(ch, which);
  return {p.x, p.y - eps_of(ch, which) * s};
}

double phase_phi2(const CompositionPoint& cp, const PlanarPoint& q) {
  auto P2 = shifted_vertex(cp.chain, 2, cp.s2);
  return (checked_distance(q, P2) + checked_distance(P2, cp.q2) - cp.split_time()) * cp.omega2;
}

double phase_phi1(const CompositionPoint& cp, const PlanarPoint& q) {
  auto P1 = shifted_vertex(cp.chain, 1, cp.s1);
  return (checked_distance(cp.q1, P1) + checked_distance(P1, q) - (cp.t - cp.split_time())) *
         cp.omega1;
}

Matrix3 composition_hessian(double dxx, double C, double omega) {
  return {{{dxx, 0.0, 1.0}, {0.0, omega * C, 0.0}, {1.0, 0.0, 0.0}}};
}

int matrix_signature(const Matrix3& m, std::array<double, 3>* eigenvalues) {
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = m[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M);
  int sig = 0;
  for (int i = 0; i < 3; ++i) {
    double e = es.eigenvalues()(i);
    if (eigenvalues) (*eigenvalues)[i] = e;
    sig += (e > 0) - (e < 0);
  }
  return sig;
}

StationaryData stationary_eliminate(const CompositionPoint& cp) {
  validate_chain(cp.chain);
  StationaryData sd;
  sd.P2 = shifted_vertex(cp.chain, 2, cp.s2);
  sd.P1 = shifted_vertex(cp.chain, 1, cp.s1);
  const double L12 = distance(sd.P1, sd.P2);
  sd.A = cp.split_time() - distance(sd.P2, cp.q2);
  sd.B = L12 - sd.A;
  if (!(sd.A > 0 && sd.B > 0))
    throw Error(Errc::NoInteriorCriticalPoint, "critical point leaves the open segment");
  sd.q_c = {sd.P2.x + sd.A / L12 * (sd.P1.x - sd.P2.x), sd.P2.y + sd.A / L12 * (sd.P1.y - sd.P2.y)};
  sd.C = 1.0 / sd.A + 1.0 / sd.B;
  sd.omega = cp.omega1;
  sd.hessian_det = -sd.C * sd.omega;
  sd.signature = matrix_signature(composition_hessian(0.0, sd.C, sd.omega));
  return sd;
}

double composed_phase_psi(const ConeChain& ch, double t, const PlanarPoint& q1,
                          const PlanarPoint& q2, double s1, double s2, double omega) {
  auto P1 = shifted_vertex(ch, 1, s1), P2 = shifted_vertex(ch, 2, s2);
  return (checked_distance(q2, P2) + checked_distance(P2, P1) + checked_distance(P1, q1) - t) *
         omega;
}

ChainPolar chain_polar(const ConeChain& ch, int which, const PlanarPoint& q) {
  auto p = base_vertex(ch, which);
  double dx = q.x - p.x, dy = q.y - p.y;
  return {std::hypot(dx, dy), std::atan2(eps_of(ch, which) * dy, dx)};
}

namespace {

// sin(th) S(th), continuous through th = +-pi (S is even, sin odd)
double outgoing(double alpha, double th) {
  return th >= 0 ? sine_scattering_product(alpha, SineProduct::outgoing_at_pi, th)
                 : -sine_scattering_product(alpha, SineProduct::outgoing_at_pi, -th);
}

} // namespace

cplx amplitude_tilde(const ConeChain& ch, double /*t*/, const PlanarPoint& q1,
                     const PlanarPoint& q2, double omega) {
  validate_chain(ch);
  auto c1 = chain_polar(ch, 1, q1), c2 = chain_polar(ch, 2, q2);
  if (!(c1.r > 0 && c2.r > 0)) throw Error(Errc::DegenerateDistance, "endpoint at a vertex");
  double p1 = sine_scattering_product(ch.alpha1, SineProduct::incoming_at_0, c1.theta);
  double p2 = outgoing(ch.alpha2, c2.theta);
  return std::polar(1.0, kPi / 4) * (4 * kPi * kPi) * p1 * p2 *
         std::sqrt(ch.b / (c1.r * c2.r)) * std::pow(omega, 1.5);
}

cplx principal_symbol_lambda0(const ConeChain& ch, double theta1, double theta2, double omega) {
  validate_chain(ch);
  auto s2 = scattering_matrix(ch.alpha2, theta2);
  auto s1 = scattering_matrix(ch.alpha1, -kPi - theta1);
  if (s1.is_pole || s2.is_pole)
    throw Error(Errc::GeometricDirection, "principal symbol evaluated at a geometric direction");
  return 2 * kPi * std::polar(1.0, kPi / 4) / std::sqrt(omega * ch.b) * s2.value * s1.value;
}

NondegeneracyReport nondegeneracy_check(const PhaseFunction& phase, const std::vector<double>& z,
                                        const std::vector<double>& theta, double step,
                                        double threshold) {
  const std::size_t nz = z.size(), nt = theta.size(), nv = nz + nt;
  std::vector<double> v(z);
  v.insert(v.end(), theta.begin(), theta.end());
  auto eval = [&](const std::vector<double>& w) {
    std::vector<double> a(w.begin(), w.begin() + nz), b(w.begin() + nz, w.end());
    return phase(a, b);
  };
  auto mixed = [&](std::size_t i, std::size_t j, double h) {
    std::vector<double> w(v);
    if (i == j) {
      double f0 = eval(w);
      w[i] = v[i] + h;
      double fp = eval(w);
      w[i] = v[i] - h;
      double fm = eval(w);
      return (fp - 2 * f0 + fm) / (h * h);
    }
    double acc = 0.0;
    for (int si : {1, -1})
      for (int sj : {1, -1}) {
        w = v;
        w[i] += si * h;
        w[j] += sj * h;
        acc += si * sj * eval(w);
      }
    return acc / (4 * h * h);
  };
  Eigen::MatrixXd M(nt, nv);
  for (std::size_t k = 0; k < nt; ++k)
    for (std::size_t j = 0; j < nv; ++j) {
      double d1 = mixed(nz + k, j, step), d2 = mixed(nz + k, j, 0.5 * step);
      M(k, j) = (4 * d2 - d1) / 3;
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  NondegeneracyReport rep;
  rep.rows = int(nt);
  rep.cols = int(nv);
  rep.sigma_min = svd.singularValues().minCoeff();
  rep.pass = rep.sigma_min > threshold;
  return rep;
}

NondegeneracyReport nondegeneracy_pair(int eps, const PlanarPoint& q1, const PlanarPoint& q2,
                                       double omega) {
  const double t = std::hypot(q1.x, q1.y) + std::hypot(q2.x, q2.y);
  auto phase = [eps](const std::vector<double>& z, const std::vector<double>& th) {
    double s = th[0], w = th[1];
    double py = -eps * s;
    return w * (std::hypot(z[1], z[2] - py) + std::hypot(z[3], z[4] - py) - z[0]);
  };
  return nondegeneracy_check(phase, {t, q1.x, q1.y, q2.x, q2.y}, {0.0, omega});
}

NondegeneracyReport nondegeneracy_system(const ConeChain& ch, const PlanarPoint& q1,
                                         const PlanarPoint& q2, double omega) {
  const double t = distance(q2, base_vertex(ch, 2)) + ch.b + distance(base_vertex(ch, 1), q1);
  auto phase = [ch](const std::vector<double>& z, const std::vector<double>& th) {
    return composed_phase_psi(ch, z[0], {z[1], z[2]}, {z[3], z[4]}, th[0], th[1], th[2]);
  };
  return nondegeneracy_check(phase, {t, q1.x, q1.y, q2.x, q2.y}, {0.0, 0.0, omega});
}

FrontPoint stationary_front(const ConeChain& ch, const PlanarPoint& q1, const PlanarPoint& q2,
                            FrontKind kind) {
  validate_chain(ch);
  const auto p1 = base_vertex(ch, 1), p2 = base_vertex(ch, 2);
  const double smax = 10 * ch.total_length() + distance(q1, q2);
  auto path = [&](double s1, double s2) {
    auto P1 = shifted_vertex(ch, 1, s1), P2 = shifted_vertex(ch, 2, s2);
    return distance(q2, P2) + distance(P2, P1) + distance(P1, q1);
  };
  auto argmin = [&](auto f) { return boost::math::tools::brent_find_minima(f, 0.0, smax, 52).first; };
  FrontPoint fp;
  switch (kind) {
    case FrontKind::lambda0:
      fp.t_explicit = distance(q2, p2) + ch.b + distance(p1, q1);
      break;
    case FrontKind::lambda1:
      fp.s2 = argmin([&](double s) { return path(0.0, s); });
      fp.t_explicit = distance(q2, p1) + distance(p1, q1);
      break;
    case FrontKind::lambda2:
      fp.s1 = argmin([&](double s) { return path(s, 0.0); });
      fp.t_explicit = distance(q2, p2) + distance(p2, q1);
      break;
    case FrontKind::lambda3: {
      auto inner = [&](double s1) { return argmin([&](double s) { return path(s1, s); }); };
      fp.s1 = argmin([&](double s1) { return path(s1, inner(s1)); });
      fp.s2 = inner(fp.s1);
      fp.t_explicit = distance(q2, q1);
      break;
    }
  }
  fp.t_stationary = path(fp.s1, fp.s2);
  return fp;
}

cplx cone_amplitude(const ConeChain& ch, int which, double s, const PlanarPoint& a,
                    const PlanarPoint& b) {
  const auto p = base_vertex(ch, which);
  const int eps = eps_of(ch, which);
  auto pa = shifted_vertex_coords({a.x - p.x, a.y - p.y}, eps, s);
  auto pb = shifted_vertex_coords({b.x - p.x, b.y - p.y}, eps, s);
  double c = diffraction_coefficient_reg(alpha_of(ch, which), pa.theta, pb.theta);
  return cplx(0.0, -eps * 2 * kPi) * c / std::sqrt(pa.r * pb.r);
}

cplx stationary_phase_value(const CompositionPoint& cp, bool unit_amplitude) {
  auto sd = stationary_eliminate(cp);
  const double w = cp.omega1;
  const double psi = composed_phase_psi(cp.chain, cp.t, cp.q1, cp.q2, cp.s1, cp.s2, w);
  cplx amp = 1.0;
  if (!unit_amplitude)
    amp = w * cone_amplitude(cp.chain, 1, cp.s1, sd.q_c, cp.q1) * w *
          cone_amplitude(cp.chain, 2, cp.s2, cp.q2, sd.q_c);
  return std::pow(2 * kPi, 1.5) / std::sqrt(w * sd.C) * std::polar(1.0, kPi / 4) *
         std::polar(1.0, psi) * amp;
}

OracleResult oscillatory_oracle(const CompositionPoint& cp, const OracleOptions& opt) {
  const auto sd = stationary_eliminate(cp);
  const double w = cp.omega1, sig = opt.sigma_tau, Phi = opt.phi_half_width;
  const double L12 = distance(sd.P1, sd.P2);
  const PlanarPoint ex{(sd.P1.x - sd.P2.x) / L12, (sd.P1.y - sd.P2.y) / L12};
  const PlanarPoint ey{-ex.y, ex.x};
  const double d2 = distance(sd.P2, cp.q2), d1q = distance(cp.q1, sd.P1);
  const double t0 = cp.split_time();
  const double rho_half = 9.0 / (w * sig);
  const double rlo = std::max(sd.A - rho_half, 1e-3 * sd.A), rhi = sd.A + rho_half;
  if (rhi >= L12) throw Error(Errc::NoInteriorCriticalPoint, "radial window reaches the far vertex");
  const double root2pi_sig = std::sqrt(2 * kPi) * sig;

  auto bump = [&](double phi) {
    double u = phi / Phi;
    return std::abs(u) >= 1 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - u * u));
  };
  // Gaussian-windowed omega2 integral done in closed form: kappa = omega * f2.
  auto tau_integral = [&](double kappa) {
    cplx g = root2pi_sig * std::exp(cplx(-0.5 * kappa * kappa * sig * sig, kappa));
    return opt.unit_amplitude ? w * g : w * w * g * cplx(1.0, kappa * sig * sig);
  };
  auto integrand = [&](double rho, double phi) -> cplx {
    const double c = std::cos(phi), s = std::sin(phi);
    const PlanarPoint q{sd.P2.x + rho * (c * ex.x + s * ey.x), sd.P2.y + rho * (c * ex.y + s * ey.y)};
    const double f1 = d1q + distance(sd.P1, q) - (cp.t - t0);
    const double kappa = w * (rho + d2 - t0);
    cplx v = std::polar(1.0, w * f1) * tau_integral(kappa) * bump(phi) * rho;
    if (!opt.unit_amplitude)
      v *= w * cone_amplitude(cp.chain, 1, cp.s1, q, cp.q1) *
           cone_amplitude(cp.chain, 2, cp.s2, cp.q2, q);
    return v;
  };

  using GL = boost::math::quadrature::gauss<double, 20>;
  auto level_value = [&](int level) {
    const int nr = 4 << level;
    const int nphi = (8 << level) * std::max(1, int(std::ceil(w / 100.0)));
    cplx total = 0.0;
    for (int ip = 0; ip < nphi; ++ip) {
      double pa = -Phi + 2 * Phi * ip / nphi, pb = -Phi + 2 * Phi * (ip + 1) / nphi;
      auto outer = [&](double phi) {
        cplx acc = 0.0;
        for (int ir = 0; ir < nr; ++ir) {
          double ra = rlo + (rhi - rlo) * ir / nr, rb = rlo + (rhi - rlo) * (ir + 1) / nr;
          acc += GL::integrate([&](double rho) { return integrand(rho, phi); }, ra, rb);
        }
        return acc;
      };
      total += GL::integrate(outer, pa, pb);
    }
    return total;
  };
  OracleResult res;
  cplx prev = level_value(0);
  for (int level = 1; level <= opt.max_level; ++level) {
    cplx cur = level_value(level);
    res.value = cur;
    res.level = level;
    res.last_change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
    if (res.last_change <= opt.rel_tol) return res;
    prev = cur;
  }
  throw Error(Errc::QuadratureFailure, "oscillatory oracle did not converge");
}

} // namespace conewave
