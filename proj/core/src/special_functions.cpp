#include "conewave/special_functions.hpp"

#include <gsl/gsl_sf_dawson.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "conewave/errors.hpp"

namespace conewave {

namespace {
constexpr double kPi = std::numbers::pi;
}

Mollifier::Mollifier(double width) : h(width) {
  if (!(width > 0) || !std::isfinite(width))
    throw Error(Errc::InvalidArgument, "mollifier width must be positive");
}

double Mollifier::damping(double omega) const {
  return std::exp(-0.5 * h * h * omega * omega);
}

double bessel_j(double nu, double x) {
  if (nu < 0 || x < 0) throw Error(Errc::InvalidArgument, "bessel_j needs nu, x >= 0");
  return boost::math::cyl_bessel_j(nu, x);
}

std::vector<double> bessel_j_sequence(double nu0, int n, double x) {
  std::vector<double> out(std::max(n, 0), 0.0);
  if (n <= 0) return out;
  if (x == 0.0) {
    for (int k = 0; k < n; ++k) out[k] = (nu0 + k == 0.0) ? 1.0 : 0.0;
    return out;
  }
  if (n <= 2) {
    for (int k = 0; k < n; ++k) out[k] = boost::math::cyl_bessel_j(nu0 + k, x);
    return out;
  }
  int top = int(std::max<double>(n, x) + 12.0 * std::cbrt(x) + 20.0);
  double yp1 = 0.0, y = 1e-280;
  for (int k = top; k > 0; --k) {
    double nu = nu0 + k;
    double ym1 = 2.0 * nu / x * y - yp1;
    yp1 = y;
    y = ym1;
    if (k - 1 < n) out[k - 1] = y;
    if (std::abs(y) > 1e250) {
      y *= 1e-250;
      yp1 *= 1e-250;
      for (int j = k - 1; j < n; ++j) out[j] *= 1e-250;
    }
  }
  double j0 = boost::math::cyl_bessel_j(nu0, x);
  double j1 = boost::math::cyl_bessel_j(nu0 + 1, x);
  const double m = std::max(std::abs(out[0]), std::abs(out[1]));
  const double a0 = out[0] / m, a1 = out[1] / m;
  const double c = (j0 * a0 + j1 * a1) / (a0 * a0 + a1 * a1) / m;
  for (auto& v : out) v *= c;
  return out;
}

namespace {

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t na = a.size(), nb = b.size();
  std::vector<double> out(na + nb - 1, 0.0);
  if (std::min(na, nb) < 64) {
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) out[i + j] += a[i] * b[j];
    return out;
  }
  std::size_t N = 1;
  while (N < na + nb) N <<= 1;
  std::vector<double> pa(a), pb(b);
  pa.resize(N, 0.0);
  pb.resize(N, 0.0);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> fa, fb;
  fft.fwd(fa, pa);
  fft.fwd(fb, pb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  std::vector<double> c;
  fft.inv(c, fa);
  std::copy_n(c.begin(), out.size(), out.begin());
  return out;
}

std::vector<double> half_derivative_l1(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> D(n, 0.0);
  if (n < 2) return D;
  std::vector<double> slope(n - 1), w(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) slope[k] = (f[k + 1] - f[k]) / h;
  // w_m = int over one cell of (y - y')^{-1/2}, m = 1..n-1
  for (std::size_t m = 1; m < n; ++m)
    w[m - 1] = 2.0 * std::sqrt(h) * (std::sqrt(double(m)) - std::sqrt(double(m - 1)));
  auto c = convolve(slope, w);
  const double rs = 1.0 / std::sqrt(kPi);
  for (std::size_t i = 1; i < n; ++i) {
    D[i] = rs * c[i - 1];
    if (f[0] != 0.0) D[i] += f[0] * rs / std::sqrt(double(i) * h);
  }
  return D;
}

std::vector<double> half_derivative_spectral(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::size_t N = 1;
  while (N < 8 * n) N <<= 1;
  std::vector<double> p(f);
  p.resize(N, 0.0);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> F;
  fft.fwd(F, p);
  const std::complex<double> rot = std::polar(1.0, kPi / 4);
  for (std::size_t k = 0; k < F.size(); ++k) {
    double xi = 2 * kPi * double(k) / (double(N) * h);
    F[k] *= std::sqrt(xi) * (k == N / 2 ? std::complex<double>(std::cos(kPi / 4)) : rot);
  }
  std::vector<double> out;
  fft.inv(out, F, N);
  out.resize(n);
  return out;
}

} // namespace

std::vector<double> half_derivative_uniform(const std::vector<double>& f, double dy,
                                            HalfDerivativeMethod m) {
  if (!(dy > 0)) throw Error(Errc::NonUniformGrid, "grid step must be positive");
  return m == HalfDerivativeMethod::convolution ? half_derivative_l1(f, dy)
                                                : half_derivative_spectral(f, dy);
}

SampledFunction1D half_derivative(const SampledFunction1D& f, HalfDerivativeMethod m) {
  const auto& g = f.grid;
  if (g.size() != f.values.size())
    throw Error(Errc::InvalidArgument, "grid and values differ in length");
  if (g.size() < 2) throw Error(Errc::NonUniformGrid, "need at least two grid points");
  const double h = (g.back() - g.front()) / double(g.size() - 1);
  for (std::size_t i = 1; i < g.size(); ++i)
    if (std::abs((g[i] - g[i - 1]) - h) > 1e-9 * std::abs(h))
      throw Error(Errc::NonUniformGrid, "grid is not uniform at index " + std::to_string(i));
  return {g, half_derivative_uniform(f.values, h, m)};
}

double mollified_delta(const Mollifier& m, double u) {
  return std::exp(-0.5 * u * u / (m.h * m.h)) / std::sqrt(2 * kPi * m.h * m.h);
}

cplx mollified_inverse_power(const Mollifier& m, double t, double L, double order) {
  const bool half = std::abs(order + 0.5) < 1e-12;
  if (!half && std::abs(order + 1.0) > 1e-12)
    throw Error(Errc::InvalidArgument, "order must be -1 or -1/2");
  const double s = -order;
  const double x = (t - L) / m.h;
  const double sg = (x > 0) - (x < 0);
  if (std::abs(x) > 25) {
    // E[(x + g)^{-s}] = |x|^{-s} sum_k C(-s, 2k) (2k-1)!! x^{-2k}; the
    // exp(-x^2/2) remainder is below double precision here
    double sum = 1.0, term = 1.0;
    for (int k = 1; k <= 12; ++k) {
      term *= (-s - 2 * k + 2) * (-s - 2 * k + 1) / ((2.0 * k) * (2.0 * k - 1)) * (2 * k - 1) / (x * x);
      sum += term;
    }
    const double mag = std::pow(std::abs(x) * m.h, -s) * sum;
    return x > 0 ? cplx(mag, 0.0) : std::polar(mag, kPi * s);
  }
  // Rotate the frequency ray into the lower (x>0) or upper (x<0) half plane:
  // both exp(-i v x) and exp(-v^2/2) then decay along it.
  const double beta = kPi / 8;
  const cplx e = std::polar(1.0, -beta * sg);
  const cplx e2 = e * e;
  auto f_one = [&](double rho) { return std::exp(-cplx(0, 1) * rho * x * e - 0.5 * rho * rho * e2); };
  auto f_half = [&](double w) {
    double rho = w * w;
    return 2.0 * std::exp(-cplx(0, 1) * rho * x * e - 0.5 * rho * rho * e2);
  };
  const double vmax = half ? 4.0 : 12.0;
  double split = vmax;
  if (sg != 0) {
    double decay = 50.0 / (std::abs(x) * std::sin(beta));
    split = std::min(vmax, half ? std::sqrt(decay) : decay);
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  cplx total = 0.0;
  double err_total = 0.0;
  auto run = [&](double a, double b) {
    double err = 0.0;
    cplx v = half ? GK::integrate(f_half, a, b, 20, 1e-13, &err)
                  : GK::integrate(f_one, a, b, 20, 1e-13, &err);
    total += v;
    err_total += err;
  };
  run(0.0, split);
  if (split < vmax) run(split, vmax);
  if (!(err_total <= 1e-9 * std::max(std::abs(total), 1e-300)))
    throw Error(Errc::QuadratureFailure, "mollified_inverse_power error target not met");
  // ray Jacobian and v^{s-1} along the ray
  const cplx ray = std::pow(e, s);
  const cplx pref = std::polar(1.0, kPi * s / 2) / boost::math::tgamma(s) * std::pow(m.h, -s);
  return pref * ray * total;
}

std::vector<double> find_roots_convex(const std::function<double(double)>& g, double lo,
                                      double hi, int samples) {
  if (!(hi > lo)) throw Error(Errc::InvalidArgument, "empty root domain");
  samples = std::max(samples, 4);
  std::vector<double> xs(samples + 1), gs(samples + 1);
  double scale = 0.0;
  for (int i = 0; i <= samples; ++i) {
    xs[i] = lo + (hi - lo) * i / samples;
    gs[i] = g(xs[i]);
    scale = std::max(scale, std::abs(gs[i]));
  }
  for (int i = 1; i < samples; ++i)
    if (gs[i - 1] - 2 * gs[i] + gs[i + 1] < -1e-10 * std::max(scale, 1.0))
      throw Error(Errc::NotConvex, "sampled second difference is negative");
  int imin = int(std::min_element(gs.begin(), gs.end()) - gs.begin());
  double a = xs[std::max(imin - 1, 0)], b = xs[std::min(imin + 1, samples)];
  auto mres = boost::math::tools::brent_find_minima(g, a, b, 52);
  double smin = mres.first, gmin = mres.second;
  if (gs[imin] < gmin) { smin = xs[imin]; gmin = gs[imin]; }

  std::vector<double> roots;
  if (gmin > 0) return roots;
  if (gmin == 0) return {smin};
  auto tol = [](double u, double v) { return std::abs(u - v) <= 1e-14 * std::max(1.0, std::abs(u)); };
  auto solve = [&](double u, double v) {
    std::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(g, u, v, tol, it);
    return 0.5 * (r.first + r.second);
  };
  double glo = g(lo), ghi = g(hi);
  if (glo == 0) roots.push_back(lo);
  else if (glo > 0) roots.push_back(solve(lo, smin));
  if (ghi == 0) roots.push_back(hi);
  else if (ghi > 0) roots.push_back(solve(smin, hi));
  return roots;
}

double dawson(double x) { return gsl_sf_dawson(x); }

} // namespace conewave
