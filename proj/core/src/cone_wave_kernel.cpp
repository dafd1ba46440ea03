#include "conewave/cone_wave_kernel.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "conewave/diffraction.hpp"
#include "conewave/errors.hpp"
#include "quadrature.hpp"

namespace conewave {

namespace {

constexpr double kPi = std::numbers::pi;
using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

void check_points(const ConePoint& q1, const ConePoint& q2) {
  if (!(q1.r > 0 && q2.r > 0)) throw Error(Errc::InvalidArgument, "points must avoid the vertex");
}

// int E(t') g_h(t - t') dt' for E = c_b / sqrt(t'^2 - D2) on (start, T) and
// c_a / sqrt(t'^2 - D2) beyond T. `singular` means start^2 == D2.
double mollify_sqrt_kernel(double t, double h, double D2, double start, bool singular, double T,
                           double cb, double ca) {
  const Mollifier m(h);
  const double lo = t - 10 * h, hi = t + 10 * h;
  double total = 0.0;
  auto piece = [&](double a, double b, double c) {
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (!(b > a) || c == 0.0) return;
    double err = 0.0;
    if (singular) {
      const double d = start;
      auto f = [&](double v) {
        double tp = d + v * v;
        return 2.0 * c / std::sqrt(2 * d + v * v) * mollified_delta(m, t - tp);
      };
      total += GK::integrate(f, std::sqrt(std::max(a - d, 0.0)), std::sqrt(b - d), 25, 1e-12, &err);
    } else {
      auto f = [&](double tp) { return c / std::sqrt(tp * tp - D2) * mollified_delta(m, t - tp); };
      total += GK::integrate(f, a, b, 25, 1e-12, &err);
    }
  };
  if (T > start) piece(start, T, cb);
  piece(std::max(T, start), hi, ca);
  return total;
}

} // namespace

const char* front_region_name(FrontRegion r) noexcept {
  switch (r) {
    case FrontRegion::before_direct: return "before_direct";
    case FrontRegion::between_fronts: return "between_fronts";
    case FrontRegion::after_diffracted: return "after_diffracted";
    case FrontRegion::near_front: return "near_front";
  }
  return "unknown";
}

std::vector<double> direct_front_times(double alpha, const ConePoint& q1, const ConePoint& q2) {
  std::vector<double> out;
  if (q1.r == 0.0 || q2.r == 0.0) return {q1.r + q2.r};
  const double d = q1.theta - q2.theta;
  const int kmax = int(std::ceil((std::abs(d) + kPi) / alpha)) + 1;
  for (int k = -kmax; k <= kmax; ++k) {
    double a = d + k * alpha;
    if (std::abs(a) < kPi) {
      double d2 = q1.r * q1.r + q2.r * q2.r - 2 * q1.r * q2.r * std::cos(a);
      out.push_back(std::sqrt(std::max(d2, 0.0)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FrontRegion classify_region(double alpha, const KernelQuery& q, double tol) {
  const double T = q.q1.r + q.q2.r;
  auto direct = direct_front_times(alpha, q.q1, q.q2);
  if (std::abs(q.t - T) <= tol) return FrontRegion::near_front;
  for (double d : direct)
    if (std::abs(q.t - d) <= tol) return FrontRegion::near_front;
  const double first = direct.empty() ? T : direct.front();
  if (q.t < first) return FrontRegion::before_direct;
  if (q.t < T) return FrontRegion::between_fronts;
  return FrontRegion::after_diffracted;
}

KernelValue sine_kernel_4pi_closed(const KernelQuery& q) {
  check_points(q.q1, q.q2);
  const double alpha = 4 * kPi;
  const double sep = angular_separation(alpha, q.q1.theta, q.q2.theta);
  const double r1 = q.q1.r, r2 = q.q2.r, T = r1 + r2;
  const double D2 = r1 * r1 + r2 * r2 - 2 * r1 * r2 * std::cos(sep);
  const double cb = 1 / (2 * kPi), ca = 1 / (4 * kPi);
  if (q.h > 0) {
    const bool direct = sep < kPi;
    const double start = direct ? std::sqrt(std::max(D2, 0.0)) : T;
    double v = mollify_sqrt_kernel(q.t, q.h, D2, start, direct, T, cb, ca);
    return {v, classify_region(alpha, q, 10 * q.h)};
  }
  auto region = classify_region(alpha, q, 1e-12);
  switch (region) {
    case FrontRegion::near_front: throw Error(Errc::OnFront, "t lies on a front");
    case FrontRegion::before_direct: return {0.0, region};
    case FrontRegion::between_fronts: return {cb / std::sqrt(q.t * q.t - D2), region};
    case FrontRegion::after_diffracted: return {ca / std::sqrt(q.t * q.t - D2), region};
  }
  return {0.0, region};
}

KernelValue sine_kernel_plane(const KernelQuery& q) {
  const double d = cone_distance(2 * kPi, q.q1, q.q2);
  const double c = 1 / (2 * kPi);
  FrontRegion region;
  if (q.h > 0) {
    region = std::abs(q.t - d) <= 10 * q.h ? FrontRegion::near_front
             : q.t < d                      ? FrontRegion::before_direct
                                            : FrontRegion::between_fronts;
    return {mollify_sqrt_kernel(q.t, q.h, d * d, d, true, d, c, c), region};
  }
  if (std::abs(q.t - d) <= 1e-12) throw Error(Errc::OnFront, "t lies on the front");
  if (q.t < d) return {0.0, FrontRegion::before_direct};
  return {c / std::sqrt(q.t * q.t - d * d), FrontRegion::between_fronts};
}

// ---------------------------------------------------------------- Cheeger

namespace {

struct ModePlan {
  double nu1;
  int q = 0, p = 0;  // nu_{j + q m} = j nu1 + p m when q > 0
};

ModePlan mode_plan(double alpha) {
  ModePlan pl{2 * kPi / alpha};
  for (int q = 1; q <= 12; ++q) {
    double v = q * pl.nu1;
    if (std::round(v) >= 1 && std::abs(v - std::round(v)) < 1e-10) {
      pl.q = q;
      pl.p = int(std::round(v));
      break;
    }
  }
  return pl;
}

void mode_values(const ModePlan& pl, double x, int kmax, std::vector<double>& out) {
  out.assign(kmax + 1, 0.0);
  if (pl.q == 0) {
    for (int k = 0; k <= kmax; ++k) out[k] = bessel_j(k * pl.nu1, x);
    return;
  }
  for (int j = 0; j < pl.q && j <= kmax; ++j) {
    int mmax = (kmax - j) / pl.q;
    auto seq = bessel_j_sequence(j * pl.nu1, pl.p * mmax + 2, x);
    for (int m = 0; m <= mmax; ++m) out[j + pl.q * m] = seq[pl.p * m];
  }
}

} // namespace

std::vector<double> sine_kernel_cheeger_series_sweep(double alpha, const std::vector<double>& ts,
                                                     const ConePoint& q1, const ConePoint& q2,
                                                     double h, int mode_cut) {
  check_points(q1, q2);
  if (!(h > 0)) throw Error(Errc::InvalidArgument, "Cheeger series needs h > 0");
  if (ts.empty()) return {};
  const ModePlan pl = mode_plan(alpha);
  const double r1 = q1.r, r2 = q2.r, rmax = std::max(r1, r2);
  const double dth = q1.theta - q2.theta;
  const double lam_max = std::sqrt(80.0) / h;
  const double tmax = *std::max_element(ts.begin(), ts.end());
  const std::size_t n = ts.size();

  double max_last = 0.0, max_F = 0.0;
  std::vector<double> j1, j2;
  auto integrand = [&](double lam, std::vector<double>& out) {
    const double x = lam * rmax;
    int kmax = mode_cut > 0 ? mode_cut
                            : int(std::ceil((x + 10 * std::cbrt(x) + 20) / pl.nu1));
    mode_values(pl, lam * r1, kmax, j1);
    mode_values(pl, lam * r2, kmax, j2);
    double F = j1[0] * j2[0];
    double last = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      last = 2 * std::cos(k * pl.nu1 * dth) * j1[k] * j2[k];
      F += last;
    }
    max_last = std::max(max_last, std::abs(last));
    max_F = std::max(max_F, std::abs(F));
    F *= std::exp(-0.5 * h * h * lam * lam) / alpha;
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sin(lam * ts[i]) * F;
  };
  const double period = 2 * kPi / (tmax + r1 + r2);
  std::vector<double> breaks;
  for (double l = 0.0; l < lam_max; l += period) breaks.push_back(l);
  breaks.push_back(lam_max);
  double err = 0.0;
  auto res = detail::integrate_vector(integrand, breaks, n, 1e-9, 1e-13,
                                      int(4 * breaks.size()) + 400, &err);
  if (max_last > 1e-8 * max_F)
    throw Error(Errc::ModeTailTooLarge, "last included mode is not negligible; raise mode_cut");
  double scale = 0.0;
  for (double v : res) scale = std::max(scale, std::abs(v));
  if (err > 1e-7 * std::max(scale, 1e-6))
    throw Error(Errc::QuadratureFailure, "lambda integral did not converge");
  return res;
}

KernelValue sine_kernel_cheeger_series(double alpha, const KernelQuery& q, int mode_cut) {
  auto v = sine_kernel_cheeger_series_sweep(alpha, {q.t}, q.q1, q.q2, q.h, mode_cut);
  return {v[0], classify_region(alpha, q, 10 * q.h)};
}

// ----------------------------------------------------- moving conical point

namespace {

struct MovingFrame {
  PlanarPoint p1, p2;
  int eps;
};

// Chart with the two points symmetric about the line the vertex moves along.
MovingFrame moving_frame(const ConePoint& q1, const ConePoint& q2, int eps) {
  if (eps != 1 && eps != -1) throw Error(Errc::InvalidArgument, "eps must be +-1");
  double D = reduce_angle(4 * kPi, q2.theta - q1.theta);
  double r1 = q1.r, r2 = q2.r;
  if (D > 2 * kPi) {
    D = 4 * kPi - D;
    std::swap(r1, r2);
  }
  if (D < 1e-9 || std::abs(D - 2 * kPi) < 1e-9)
    throw Error(Errc::PointOnCut, "points lie on the line swept by the vertex");
  double a1 = 0.5 * (kPi - D), a2 = 0.5 * (kPi + D);
  if (eps > 0) {
    a1 = -a1;
    a2 = -a2;
  }
  return {{r1 * std::cos(a1), r1 * std::sin(a1)}, {r2 * std::cos(a2), r2 * std::sin(a2)}, eps};
}

double g_moving(const MovingFrame& f, double s, double t) {
  return shifted_vertex_coords(f.p1, f.eps, s).r + shifted_vertex_coords(f.p2, f.eps, s).r - t;
}

double g_moving_prime(const MovingFrame& f, double s) {
  auto d = [&](const PlanarPoint& p) {
    return (s + f.eps * p.y) / shifted_vertex_coords(p, f.eps, s).r;
  };
  return d(f.p1) + d(f.p2);
}

double sin_half_sum(const MovingFrame& f, double s, double& rr) {
  auto a = shifted_vertex_coords(f.p1, f.eps, s), b = shifted_vertex_coords(f.p2, f.eps, s);
  rr = a.r * b.r;
  return std::sin(0.5 * (a.theta + b.theta));
}

} // namespace

KernelValue sine_kernel_moving_point(const KernelQuery& q, int eps) {
  check_points(q.q1, q.q2);
  const auto f = moving_frame(q.q1, q.q2, eps);
  const double smax = 0.5 * (q.t + q.q1.r + q.q2.r) + 1.0;
  auto roots = find_roots_convex([&](double s) { return g_moving(f, s, q.t); }, 0.0, smax);
  double sum = 0.0;
  for (double s : roots) {
    double gp = g_moving_prime(f, s);
    if (std::abs(gp) < 1e-10) throw Error(Errc::TangentRoot, "front tangency");
    double rr = 0.0;
    double sn = sin_half_sum(f, s, rr);
    sum += -eps * sn / (4 * kPi * std::sqrt(rr) * std::abs(gp));
  }
  return {sum, classify_region(4 * kPi, q, 1e-12)};
}

cplx spherical_wave_l(int j, double t, const ConePoint& q, const Mollifier& m) {
  if (j != 1 && j != -1) throw Error(Errc::InvalidArgument, "j must be +-1");
  if (!(q.r > 0)) throw Error(Errc::InvalidArgument, "r must be positive");
  return mollified_delta(m, t - q.r) / (4 * kPi * std::sqrt(q.r)) *
         std::polar(1.0, -j * q.theta / 2);
}

double upsilon0(double t, const ConePoint& q1, const ConePoint& q2, double dir_theta,
                const Mollifier& m) {
  check_points(q1, q2);
  return mollified_delta(m, t - q1.r - q2.r) / (4 * kPi * std::sqrt(q1.r * q2.r)) *
         std::cos(0.5 * (q1.theta + q2.theta) - dir_theta);
}

namespace {

// int_0^inf w exp(i w g - h^2 w^2 / 2) dw
cplx omega_integral(double g, double h) {
  const double x = g / (std::sqrt(2.0) * h);
  double re;
  if (std::abs(x) > 20) {
    // 1 - 2x D(x) = -sum_{n>=1} (2n-1)!! / (2x^2)^n; eight terms keep the
    // seam with the direct form below 1e-18 relative
    const double u = 0.5 / (x * x);
    double term = 1.0;
    re = 0.0;
    for (int n = 1; n <= 8; ++n) {
      term *= (2 * n - 1) * u;
      re -= term;
    }
  } else {
    re = 1.0 - 2.0 * x * dawson(x);
  }
  return cplx(re, std::sqrt(kPi) * x * std::exp(-x * x)) / (h * h);
}

} // namespace

cplx halfwave_mu_4pi(double t, const ConePoint& q1, const ConePoint& q2, const Mollifier& m) {
  check_points(q1, q2);
  const auto f = moving_frame(q1, q2, -1);
  const double h = m.h;
  auto integrand = [&](double s) {
    double rr = 0.0;
    double sn = sin_half_sum(f, s, rr);
    return sn / std::sqrt(rr) * omega_integral(g_moving(f, s, t), h);
  };
  const double smax = 0.5 * (t + q1.r + q2.r) + 1.0;
  std::vector<double> br{0.0, smax};
  auto gfun = [&](double s) { return g_moving(f, s, t); };
  auto mres = boost::math::tools::brent_find_minima(gfun, 0.0, smax, 52);
  br.push_back(mres.first);
  std::vector<double> roots;
  try {
    roots = find_roots_convex(gfun, 0.0, smax);
  } catch (const Error&) {
  }
  for (double s : roots) {
    double w = 8 * h / std::max(std::abs(g_moving_prime(f, s)), 1e-3);
    for (double b : {s - w, s, s + w}) br.push_back(b);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::remove_if(br.begin(), br.end(), [&](double b) { return b < 0 || b > smax; }),
           br.end());
  br.erase(std::unique(br.begin(), br.end(), [](double a, double b) { return b - a < 1e-14; }),
           br.end());
  cplx total = 0.0;
  double err_total = 0.0, l1 = 0.0;
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    double err = 0.0, L1 = 0.0;
    total += GK::integrate(integrand, br[k], br[k + 1], 25, 1e-11, &err, &L1);
    err_total += err;
    l1 += L1;
  }
  double err = 0.0, L1 = 0.0;
  total += GK::integrate(integrand, smax, std::numeric_limits<double>::infinity(), 25, 1e-11,
                         &err, &L1);
  err_total += err;
  l1 += L1;
  if (err_total > 1e-8 * std::max(l1, 1e-300))
    throw Error(Errc::QuadratureFailure, "halfwave s-integral did not converge");
  return cplx(0.0, -1.0 / (4 * kPi * kPi)) * total;
}

cplx hw_leading_amplitude(double alpha, int eps, const ConePoint& q1, const ConePoint& q2) {
  check_points(q1, q2);
  if (eps != 1 && eps != -1) throw Error(Errc::InvalidArgument, "eps must be +-1");
  double c = diffraction_coefficient_reg(alpha, q1.theta, q2.theta);
  return cplx(0.0, -eps * 2 * kPi) * c / std::sqrt(q1.r * q2.r);
}

} // namespace conewave
