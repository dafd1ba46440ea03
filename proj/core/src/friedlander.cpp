#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "conewave/cone_wave_kernel.hpp"
#include "conewave/errors.hpp"

namespace conewave {

namespace {

constexpr double kPi = std::numbers::pi;

// The fractional integral is taken with the bare kernel |y - y'|^{-1/2}, i.e.
// Gamma(1/2) = sqrt(pi) times the Riemann-Liouville half derivative.
const double kA1Norm = std::sqrt(kPi);

double F_antideriv(double u) { return u * std::atan(u) - 0.5 * std::log1p(u * u); }

// sum_{k > K} G(y, z + alpha k) for y > 1: the integral (1/alpha) int_W^inf G,
// W = z + alpha (K + 1/2), plus the midpoint Euler-Maclaurin corrections
// f'/24 - 7 f'''/5760 at W; G ~ 2a / z^2 supplies the third derivative.
double tail(double alpha, double a, double z, int K) {
  const double W = z + alpha * (K + 0.5);
  const double up = (kPi + W) / a, um = (W - kPi) / a;
  const double I = kPi - a / kPi * (F_antideriv(up) - F_antideriv(um));
  const double Gz = (1 / (1 + up * up) - 1 / (1 + um * um)) / (kPi * a);
  const double Gzzz = -48 * a / std::pow(W, 5);
  return I / alpha + alpha * Gz / 24 - 7 * alpha * alpha * alpha * Gzzz / 5760;
}

double keys(double s) {
  s = std::abs(s);
  if (s <= 1) return (1.5 * s - 2.5) * s * s + 1.0;
  if (s < 2) return ((-0.5 * s + 2.5) * s - 4.0) * s + 2.0;
  return 0.0;
}

} // namespace

double friedlander_G(double y, double z) {
  if (y <= 1.0) return (std::abs(z) < kPi && y + std::cos(z) > 0) ? 1.0 : 0.0;
  const double a = std::acosh(y);
  return (std::atan((kPi - z) / a) + std::atan((kPi + z) / a)) / kPi;
}

double friedlander_G_alpha(double alpha, double y, double z, int K) {
  if (y <= 1.0) {
    // only translates with |z + alpha k| < pi contribute
    double s = 0.0;
    int k0 = int(std::ceil((-kPi - z) / alpha)), k1 = int(std::floor((kPi - z) / alpha));
    for (int k = k0; k <= k1; ++k) s += friedlander_G(y, z + alpha * k);
    return s;
  }
  const double a = std::acosh(y);
  double s = 0.0;
  for (int k = -K; k <= K; ++k) s += friedlander_G(y, z + alpha * k);
  return s + tail(alpha, a, z, K) + tail(alpha, a, -z, K);
}

FriedlanderGrid build_friedlander(double alpha, const FriedlanderGridSpec& spec) {
  if (!(alpha > 0)) throw Error(Errc::InvalidArgument, "cone angle must be positive");
  if (!(spec.hy > 0) || spec.nz < 4 || !(spec.y_max > spec.y_min + 4 * spec.hy) ||
      spec.translates < 1)
    throw Error(Errc::InvalidArgument, "bad Friedlander grid spec");
  if (spec.y_min > -1.0)
    throw Error(Errc::InvalidArgument, "y_min must be <= -1 so that G vanishes below the grid");
  FriedlanderGrid fg;
  fg.alpha = alpha;
  fg.spec = spec;
  fg.ny = int(std::llround((spec.y_max - spec.y_min) / spec.hy)) + 1;
  fg.nz = spec.nz;
  fg.hz = alpha / spec.nz;
  fg.z0 = -0.5 * alpha;
  fg.G.resize(std::size_t(fg.ny) * fg.nz);
  fg.A1G.resize(fg.G.size());
  std::vector<double> col(fg.ny);
  for (int iz = 0; iz < fg.nz; ++iz) {
    const double z = fg.z_at(iz);
    for (int iy = 0; iy < fg.ny; ++iy)
      col[iy] = friedlander_G_alpha(alpha, fg.y_at(iy), z, spec.translates);
    auto d = half_derivative_uniform(col, spec.hy);
    std::copy(col.begin(), col.end(), fg.G.begin() + std::size_t(iz) * fg.ny);
    for (int iy = 0; iy < fg.ny; ++iy) fg.A1G[std::size_t(iz) * fg.ny + iy] = kA1Norm * d[iy];
  }
  return fg;
}

namespace {

double interp(const FriedlanderGrid& fg, double y, double z) {
  if (y < fg.spec.y_min) return 0.0;
  const double fy = (y - fg.spec.y_min) / fg.spec.hy;
  const int iy = int(std::floor(fy));
  if (iy + 2 > fg.ny - 1) throw Error(Errc::OutOfGrid, "y = " + std::to_string(y) + " beyond grid");
  const double zr = reduce_angle(fg.alpha, z - fg.z0);
  const double fz = zr / fg.hz;
  const int iz = int(std::floor(fz));
  double v = 0.0;
  for (int dz = -1; dz <= 2; ++dz) {
    const double wz = keys(fz - (iz + dz));
    int jz = ((iz + dz) % fg.nz + fg.nz) % fg.nz;
    const double* colp = fg.A1G.data() + std::size_t(jz) * fg.ny;
    double cv = 0.0;
    for (int dy = -1; dy <= 2; ++dy) {
      int jy = std::max(iy + dy, 0);
      cv += keys(fy - (iy + dy)) * colp[jy];
    }
    v += wz * cv;
  }
  return v;
}

double friedlander_pointwise(const FriedlanderGrid& fg, double t, double r1, double r2, double z) {
  const double y = (t * t - r1 * r1 - r2 * r2) / (2 * r1 * r2);
  return interp(fg, y, z) / (2 * kPi * std::sqrt(2 * r1 * r2));
}

} // namespace

KernelValue sine_kernel_friedlander(const FriedlanderGrid& fg, const KernelQuery& q) {
  if (!(q.q1.r > 0 && q.q2.r > 0)) throw Error(Errc::InvalidArgument, "points must avoid the vertex");
  const double r1 = q.q1.r, r2 = q.q2.r, z = q.q1.theta - q.q2.theta;
  if (!(q.h > 0))
    return {friedlander_pointwise(fg, q.t, r1, r2, z), classify_region(fg.alpha, q, 1e-12)};

  const Mollifier m(q.h);
  const double lo = std::max(q.t - 10 * q.h, 0.0), hi = q.t + 10 * q.h;
  std::vector<double> br{lo, hi, r1 + r2};
  for (double d : direct_front_times(fg.alpha, q.q1, q.q2)) br.push_back(d);
  std::sort(br.begin(), br.end());
  br.erase(std::remove_if(br.begin(), br.end(), [&](double b) { return b < lo || b > hi; }), br.end());
  auto f = [&](double tp) { return friedlander_pointwise(fg, tp, r1, r2, z) * mollified_delta(m, q.t - tp); };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    if (br[k + 1] - br[k] < 1e-15) continue;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, br[k], br[k + 1], 20,
                                                                            1e-9, &err);
  }
  return {total, classify_region(fg.alpha, q, 10 * q.h)};
}

} // namespace conewave
