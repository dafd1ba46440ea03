#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_dawson.h>

#include "conewave/cone_geometry.hpp"
#include "conewave/errors.hpp"
#include "conewave/special_functions.hpp"

using namespace conewave;

namespace {

SampledFunction1D sample(double lo, double hi, double dy, auto f) {
  SampledFunction1D s;
  const int n = int(std::lround((hi - lo) / dy)) + 1;
  for (int i = 0; i < n; ++i) {
    s.grid.push_back(lo + i * dy);
    s.values.push_back(f(lo + i * dy));
  }
  return s;
}

// Gaussian smoothing of (x - i0)^{-1/2} by direct quadrature, x = t - L
cplx smoothed_inverse_sqrt(double x, double h) {
  using boost::math::quadrature::gauss_kronrod;
  auto g = [h](double u) { return std::exp(-0.5 * u * u / (h * h)) / (std::sqrt(2 * pi) * h); };
  // tau - L = +v^2 (real branch) and -v^2 (branch i |.|^{-1/2})
  const double vmax = std::sqrt(std::abs(x) + 14 * h);
  double re = 0, im = 0;
  const double c = std::sqrt(std::max(x, 0.0));
  for (auto [a, b] : {std::pair{0.0, c}, std::pair{c, vmax}})
    if (b > a) re += gauss_kronrod<double, 61>::integrate([&](double v) { return 2 * g(x - v * v); }, a, b, 15, 1e-13);
  im = gauss_kronrod<double, 61>::integrate([&](double v) { return 2 * g(x + v * v); }, 0.0, vmax, 15, 1e-13);
  return {re, im};
}

} // namespace

TEST_SUITE("special_functions") {

TEST_CASE("Bessel values") {
  CHECK(bessel_j(0.5, pi / 2) == doctest::Approx(2 / pi).epsilon(1e-14));
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(bessel_j(1.5, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(0.0, 2.404825557695773)) < 1e-15);
}

TEST_CASE("Bessel against GSL and the three-term recurrence") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> un(0, 10), ux(0.1, 100);
  for (int i = 0; i < 300; ++i) {
    const double nu = un(rng), x = ux(rng);
    const double j = bessel_j(nu, x);
    CHECK(j == doctest::Approx(gsl_sf_bessel_Jnu(nu, x)).epsilon(1e-9).scale(1e-3));
    const double n1 = nu + 1;
    const double lhs = bessel_j(n1 - 1, x) + bessel_j(n1 + 1, x), rhs = 2 * n1 / x * bessel_j(n1, x);
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("Bessel sequences by backward recurrence") {
  // GSL reports underflow for deep-tail orders; those references are skipped
  const auto old = gsl_set_error_handler_off();
  for (double nu0 : {0.0, 0.5, 2.0 / 3.0})
    for (double x : {1e-6, 0.3, 5.0, 60.0, 179.0}) {
      const auto s = bessel_j_sequence(nu0, 300, x);
      double worst = 0.0;
      for (int k = 0; k < 300; ++k) {
        gsl_sf_result r;
        if (gsl_sf_bessel_Jnu_e(nu0 + k, x, &r) != GSL_SUCCESS) continue;
        const double ref = r.val;
        if (std::abs(ref) > 1e-250) worst = std::max(worst, std::abs(s[k] - ref) / std::abs(ref));
      }
      INFO("nu0 = " << nu0 << " x = " << x);
      CHECK(worst < 1e-9);
    }
  gsl_set_error_handler(old);
}

TEST_CASE("mollifier") {
  CHECK_THROWS_AS(Mollifier(0.0), Error);
  const Mollifier one(1.0);
  CHECK(mollified_delta(one, 0.0) == doctest::Approx(1 / std::sqrt(2 * pi)));
  CHECK(mollified_delta(one, 1.0) == doctest::Approx(std::exp(-0.5) / std::sqrt(2 * pi)));
  CHECK(mollified_delta(one, -1.0) == mollified_delta(one, 1.0));
  const Mollifier m(0.01);
  double mass = 0.0;
  const double du = 1e-4;
  for (int i = -10000; i <= 10000; ++i) mass += mollified_delta(m, i * du) * du;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(mollified_delta(m, 5.01 * m.h) < 1e-5 * mollified_delta(m, 0.0));
  CHECK(m.damping(100.0) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("half derivative: zero, ramp, linearity") {
  const auto zero = half_derivative(sample(-1, 1, 1e-3, [](double) { return 0.0; }));
  for (double v : zero.values) CHECK(v == 0.0);

  const auto ramp = half_derivative(sample(-1, 2, 1e-3, [](double y) { return y > 0 ? y : 0.0; }));
  double worst = 0.0;
  for (std::size_t i = 0; i < ramp.grid.size(); ++i) {
    const double y = ramp.grid[i];
    const double ref = y > 0 ? 2 / std::sqrt(pi) * std::sqrt(y) : 0.0;
    worst = std::max(worst, std::abs(ramp.values[i] - ref));
  }
  CHECK(worst < 1e-4);

  auto f = [](double y) { return std::exp(-y * y); };
  auto g = [](double y) { return std::sin(3 * y) * std::exp(-y * y); };
  const auto df = half_derivative(sample(-6, 6, 1e-3, f));
  const auto dg = half_derivative(sample(-6, 6, 1e-3, g));
  const auto dfg = half_derivative(sample(-6, 6, 1e-3, [&](double y) { return 2 * f(y) - 0.5 * g(y); }));
  for (std::size_t i = 0; i < df.grid.size(); i += 97)
    CHECK(dfg.values[i] == doctest::Approx(2 * df.values[i] - 0.5 * dg.values[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("half derivative applied twice is the derivative") {
  for (auto method : {HalfDerivativeMethod::convolution, HalfDerivativeMethod::spectral}) {
    const double dy = 2.5e-4;
    const auto once = half_derivative(sample(-8, 8, dy, [](double y) { return std::exp(-y * y); }), method);
    const auto twice = half_derivative(once, method);
    double worst = 0.0;
    for (std::size_t i = 0; i < twice.grid.size(); ++i) {
      const double y = twice.grid[i];
      if (std::abs(y) > 5) continue;
      worst = std::max(worst, std::abs(twice.values[i] + 2 * y * std::exp(-y * y)));
    }
    // the periodised transform wraps the y^{-3/2} tail of the first pass around
    CHECK(worst < (method == HalfDerivativeMethod::convolution ? 1e-5 : 1e-3));
  }
}

TEST_CASE("half derivative: convolution and spectral agree") {
  // zero mean and first moment keep the spectral periodisation error small
  const auto s = sample(-7, 7, 2.5e-5, [](double y) { return (4 * y * y - 2) * std::exp(-y * y); });
  const auto a = half_derivative(s, HalfDerivativeMethod::convolution);
  const auto b = half_derivative(s, HalfDerivativeMethod::spectral);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.grid.size(); ++i)
    if (std::abs(a.grid[i]) < 5) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  CHECK(worst < 1e-6);
}

TEST_CASE("half derivative needs a uniform grid") {
  SampledFunction1D s{{0.0, 0.1, 0.25, 0.3}, {0, 1, 2, 3}};
  try {
    half_derivative(s);
    FAIL("expected NonUniformGrid");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonUniformGrid);
  }
}

TEST_CASE("mollified (t - L - i0)^{-1}") {
  for (double h : {0.02, 0.1, 1.0}) {
    const Mollifier m(h);
    for (double x : {-7.0, -2.5, -1.0, -0.3, 0.0, 0.2, 1.0, 3.0, 9.0}) {
      // principal value plus i pi delta
      const double u = x / std::sqrt(2.0);
      const cplx ref{std::sqrt(2.0) / h * gsl_sf_dawson(u),
                     std::sqrt(pi / 2) / h * std::exp(-0.5 * x * x)};
      const cplx v = mollified_inverse_power(m, 1.0 + x * h, 1.0, -1.0);
      CHECK(std::abs(v - ref) < 1e-9 * std::abs(ref) + 1e-12);
    }
    // real part is odd about L, peak purely imaginary
    CHECK(mollified_inverse_power(m, 2.0, 2.0, -1.0).real() == doctest::Approx(0.0).scale(1e-9 / h));
    CHECK(mollified_inverse_power(m, 2.0 + 0.7 * h, 2.0, -1.0).real() ==
          doctest::Approx(-mollified_inverse_power(m, 2.0 - 0.7 * h, 2.0, -1.0).real()));
  }
  // h -> 0 at fixed t != L
  CHECK(mollified_inverse_power(Mollifier(1e-4), 1.5, 1.0, -1.0).real() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("mollified (t - L - i0)^{-1/2}") {
  for (double h : {0.05, 0.5}) {
    const Mollifier m(h);
    for (double x : {-6.0, -1.5, -0.4, 0.0, 0.3, 1.0, 2.0, 8.0}) {
      const cplx ref = smoothed_inverse_sqrt(x * h, h);
      const cplx v = mollified_inverse_power(m, 3.0 + x * h, 3.0, -0.5);
      INFO("h = " << h << " x = " << x);
      CHECK(std::abs(v - ref) < 1e-8 * std::abs(ref));
    }
  }
  CHECK_THROWS_AS(mollified_inverse_power(Mollifier(0.1), 1, 1, -2.0), Error);
}

TEST_CASE("roots of convex functions") {
  auto r1 = find_roots_convex([](double s) { return s * s - 1; }, 0, 10);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0] == doctest::Approx(1.0).epsilon(1e-12));
  auto r2 = find_roots_convex([](double s) { return (s - 1) * (s - 3); }, 0, 10);
  REQUIRE(r2.size() == 2);
  CHECK(r2[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r2[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(find_roots_convex([](double s) { return s * s + 1; }, 0, 10).empty());
  CHECK_THROWS_AS(find_roots_convex([](double s) { return 1 - s * s; }, 0, 10), Error);
}

TEST_CASE("Dawson function") {
  CHECK(dawson(1.0) == doctest::Approx(0.5380795069127684).epsilon(1e-14));
  CHECK(dawson(-2.0) == -dawson(2.0));
}

}
