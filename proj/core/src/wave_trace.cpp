#include "conewave/wave_trace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conewave/diffraction.hpp"
#include "conewave/errors.hpp"

namespace conewave {

namespace {
constexpr double kPi = std::numbers::pi;

cplx pairwise_sum(const cplx* v, std::size_t n) {
  if (n <= 32) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}
} // namespace

TracePrediction predict_two_diffraction_singularity(double L, double b) {
  if (!(L > 0) || !(b > 0 && b < L)) throw Error(Errc::BadLeg, "need 0 < b < L");
  TracePrediction p;
  p.L = L;
  p.b = b;
  p.order = -1.0;
  p.coefficient = std::sqrt(b * (L - b)) / (4.0 * kPi * kPi) / cplx(0.0, 1.0);
  return p;
}

Spectrum pillowcase_spectrum(const PillowcaseSurface& s, double lambda_max) {
  if (!(lambda_max > 0) || !(s.a > 0 && s.b > 0))
    throw Error(Errc::InvalidArgument, "need positive sides and lambda_max");
  struct E {
    double lam;
    int mult;
  };
  std::vector<E> es;
  const int mmax = int(std::floor(lambda_max * s.a / kPi));
  for (int m = 0; m <= mmax; ++m) {
    const double x = m / s.a;
    const double rest = lambda_max * lambda_max / (kPi * kPi) - x * x;
    if (rest < 0) break;
    const int nmax = int(std::floor(std::sqrt(rest) * s.b));
    for (int n = 0; n <= nmax; ++n) {
      double lam = kPi * std::sqrt(x * x + (n / s.b) * (n / s.b));
      if (lam > lambda_max) continue;
      es.push_back({lam, (m >= 1 && n >= 1) ? 2 : 1});
    }
  }
  std::stable_sort(es.begin(), es.end(), [](const E& u, const E& v) { return u.lam < v.lam; });
  Spectrum sp;
  sp.lambda_max = lambda_max;
  for (auto& e : es) {
    sp.frequencies.push_back(e.lam);
    sp.multiplicities.push_back(e.mult);
  }
  return sp;
}

std::vector<double> pillowcase_lengths(const PillowcaseSurface& s, double tmax) {
  std::vector<double> out;
  for (int m = 0; 2 * m * s.a <= tmax; ++m)
    for (int n = 0; 2 * n * s.b <= tmax; ++n) {
      if (m == 0 && n == 0) continue;
      double l = 2 * std::hypot(m * s.a, n * s.b);
      if (l <= tmax) out.push_back(l);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return b - a < 1e-12; }),
            out.end());
  return out;
}

long long counting_function(const Spectrum& s, double lambda) {
  long long n = 0;
  for (std::size_t i = 0; i < s.frequencies.size() && s.frequencies[i] <= lambda; ++i)
    n += s.multiplicities[i];
  return n;
}

double weyl_count(double area, double lambda) { return area * lambda * lambda / (4 * kPi); }

std::vector<cplx> mollified_trace(const Spectrum& s, const std::vector<double>& ts, const Mollifier& m) {
  if (!s.frequencies.empty() && m.damping(s.lambda_max) >= 1e-10)
    throw Error(Errc::IncompleteSpectrum, "spectrum cut-off is not damped below 1e-10");
  const std::size_t n = s.frequencies.size();
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = s.multiplicities[j] * m.damping(s.frequencies[j]);
  std::vector<cplx> out(ts.size(), 0.0), buf(n);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) buf[j] = std::polar(w[j], -ts[i] * s.frequencies[j]);
    out[i] = n ? pairwise_sum(buf.data(), n) : cplx(0.0);
  }
  return out;
}

std::vector<Peak> detect_peaks(const std::vector<double>& ts, const std::vector<double>& mag,
                               double min_prominence) {
  std::vector<Peak> peaks;
  const std::size_t n = mag.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(mag[i] > mag[i - 1] && mag[i] >= mag[i + 1])) continue;
    // prominence: height above the higher of the two minima reached before a taller point
    double lmin = mag[i], rmin = mag[i];
    for (std::size_t j = i; j-- > 0;) {
      if (mag[j] > mag[i]) break;
      lmin = std::min(lmin, mag[j]);
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (mag[j] > mag[i]) break;
      rmin = std::min(rmin, mag[j]);
    }
    double prom = mag[i] - std::max(lmin, rmin);
    if (prom > min_prominence) peaks.push_back({ts[i], mag[i], prom});
  }
  return peaks;
}

SingularityFit extract_singularity_coefficient(const std::vector<double>& ts,
                                               const std::vector<cplx>& values, double L, double h,
                                               double order,
                                               const std::vector<double>& other_lengths) {
  if (ts.size() != values.size()) throw Error(Errc::InvalidArgument, "t and values differ in length");
  for (double l : other_lengths)
    if (std::abs(l - L) > 1e-9 && std::abs(l - L) <= 10 * h)
      throw Error(Errc::WindowContaminated,
                  "length " + std::to_string(l) + " lies within 10h of " + std::to_string(L));
  const Mollifier m(h);
  cplx num = 0.0;
  double den = 0.0, dn = 0.0;
  std::vector<std::pair<cplx, cplx>> pts;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (std::abs(ts[i] - L) > 6 * h) continue;
    cplx mod = mollified_inverse_power(m, ts[i], L, order);
    pts.push_back({mod, values[i]});
    num += std::conj(mod) * values[i];
    den += std::norm(mod);
    dn += std::norm(values[i]);
  }
  SingularityFit fit;
  fit.samples = int(pts.size());
  if (pts.size() < 3 || den == 0.0) throw Error(Errc::InvalidArgument, "too few samples in the fit window");
  fit.coefficient = num / den;
  double res = 0.0;
  for (auto& [mod, v] : pts) res += std::norm(v - fit.coefficient * mod);
  fit.residual_ratio = dn > 0 ? std::sqrt(res / dn) : 0.0;
  fit.valid = fit.residual_ratio < 0.2;
  return fit;
}

TracePipelineReport trace_pipeline_check(double L, double b, double omega) {
  auto pred = predict_two_diffraction_singularity(L, b);  // validates (L, b)
  TracePipelineReport r;
  r.L = L;
  r.b = b;
  const double Lb = L - b;

  // phase after the y stationary phase, as a function of u = s1 + s2, at t = L
  auto psi_tilde = [&](double u) {
    return omega * (std::sqrt(b * b + u * u) + std::sqrt(Lb * Lb + u * u) - L);
  };
  auto second = [](auto f, double x, double h) {
    auto d = [&](double k) { return (f(x + k) - 2 * f(x) + f(x - k)) / (k * k); };
    return (4 * d(0.5 * h) - d(h)) / 3;
  };
  r.psi_uu_fd = second(psi_tilde, 0.0, 1e-3);
  r.psi_uu_exact = omega * (1 / b + 1 / Lb);
  r.hessian_identity_err = std::abs(r.psi_uu_fd * b * Lb / L - omega) / omega;

  // transverse Hessian at q2 = (x, y), q1 = q2 + (L, 0), x in (-(L-b), 0)
  auto psi_y = [&](double x) {
    return [=](double y) {
      return omega * (std::hypot(x, y) + b + std::hypot(x + Lb, y) - L);
    };
  };
  const double xm = -0.5 * Lb;
  r.psi_yy_fd = second(psi_y(xm), 0.0, 1e-3);
  r.psi_yy_exact = omega * Lb / (std::abs(xm) * (Lb - std::abs(xm)));

  r.limit_incoming = regularized_sine_product(3 * kPi, SineProduct::incoming_at_0);
  r.limit_outgoing = regularized_sine_product(3 * kPi, SineProduct::outgoing_at_pi);
  const double P = r.limit_incoming * r.limit_outgoing;

  const cplx e4 = std::polar(1.0, kPi / 4);
  auto A_at = [&](double x) {
    const double r2 = std::abs(x), r1 = Lb - r2;
    const cplx a0 = 4 * kPi * kPi * e4 * P / std::sqrt(r1 * b * r2) * std::pow(omega, 1.5);
    const double hyy = omega * Lb / (r1 * r2);
    return std::pow(2 * kPi, -2.0) * e4 * a0 / std::sqrt(hyy);
  };
  const cplx A = A_at(xm);
  r.A_over_omega = A / omega;
  for (double f : {0.1, 0.3, 0.7, 0.9})
    r.A_x_spread = std::max(r.A_x_spread, std::abs(A_at(-f * Lb) - A) / std::abs(A));

  // integration by parts in u leaves i * A / psi_uu per unit omega; the
  // x-integral of the partition of unity gives the period L
  r.omega_integrand = cplx(0.0, 1.0) * A / r.psi_uu_exact;
  // int_0^inf exp(-i omega (t - L)) d omega = (1/i) (t - L - i0)^{-1}
  r.coefficient = r.omega_integrand * L / cplx(0.0, 1.0);
  r.coefficient_formula = pred.coefficient;
  r.rel_err = std::abs(r.coefficient - r.coefficient_formula) / std::abs(r.coefficient_formula);
  r.pass = r.rel_err < 1e-10 && r.hessian_identity_err < 1e-6 &&
           std::abs(r.psi_yy_fd - r.psi_yy_exact) < 1e-6 * r.psi_yy_exact && r.A_x_spread < 1e-12;
  return r;
}

} // namespace conewave
