#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "conewave/cone_geometry.hpp"
#include "conewave/errors.hpp"
#include "conewave/wave_trace.hpp"

using namespace conewave;

namespace {

// Even eigenfunctions on the doubled a x b rectangle: the (2a x 2b) torus
// modes cos(pi (m x / a + n y / b)), one per lattice vector up to sign.
std::map<long long, int> lattice_count(double a, double b, double lambda_max) {
  std::map<long long, int> out;  // key: round(lambda * 1e9)
  const int M = int(lambda_max * a / pi) + 1, N = int(lambda_max * b / pi) + 1;
  for (int m = -M; m <= M; ++m)
    for (int n = -N; n <= N; ++n) {
      if (m < 0 || (m == 0 && n < 0)) continue;  // one of +-(m, n)
      const double l = pi * std::sqrt(m * m / (a * a) + n * n / (b * b));
      if (l <= lambda_max) out[std::llround(l * 1e9)] += 1;
    }
  return out;
}

} // namespace

TEST_SUITE("wave_trace") {

TEST_CASE("predicted singularity") {
  const auto p = predict_two_diffraction_singularity(3, 1);
  CHECK(p.order == -1.0);
  CHECK(std::abs(p.coefficient) == doctest::Approx(std::sqrt(2.0) / (4 * pi * pi)).epsilon(1e-14));
  CHECK(p.coefficient.real() == 0.0);
  CHECK(p.coefficient.imag() < 0);  // 1/i
  CHECK(std::abs(predict_two_diffraction_singularity(5, 2.5).coefficient) == doctest::Approx(5 / (8 * pi * pi)));
  CHECK(std::abs(predict_two_diffraction_singularity(3, 1e-12).coefficient) < 1e-7);
  for (double b : {0.0, 3.0, 4.0, -1.0}) {
    try {
      predict_two_diffraction_singularity(3, b);
      FAIL("expected BadLeg");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::BadLeg);
    }
  }
}

TEST_CASE("pillowcase spectrum") {
  const PillowcaseSurface sq{1, 1};
  const auto s = pillowcase_spectrum(sq, 8);
  REQUIRE(s.frequencies.size() >= 5);
  CHECK(s.frequencies[0] == 0.0);
  CHECK(s.multiplicities[0] == 1);
  // 0, pi, pi, pi sqrt2 (x2), 2 pi, 2 pi
  std::vector<double> flat;
  for (std::size_t i = 0; i < s.frequencies.size(); ++i)
    for (int k = 0; k < s.multiplicities[i]; ++k) flat.push_back(s.frequencies[i]);
  const std::vector<double> head{0, pi, pi, pi * std::sqrt(2.0), pi * std::sqrt(2.0), 2 * pi, 2 * pi};
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(flat[i] == doctest::Approx(head[i]).epsilon(1e-14));
  CHECK(std::is_sorted(s.frequencies.begin(), s.frequencies.end()));

  // the torus-quotient count agrees level by level, for a non-square surface too
  for (auto surf : {PillowcaseSurface{1, 1}, PillowcaseSurface{1, 1.7}}) {
    const auto sp = pillowcase_spectrum(surf, 60);
    std::map<long long, int> got;
    for (std::size_t i = 0; i < sp.frequencies.size(); ++i) got[std::llround(sp.frequencies[i] * 1e9)] += sp.multiplicities[i];
    CHECK(got == lattice_count(surf.a, surf.b, 60));
  }

  // each mode solves -Laplace u = lambda^2 u and is even under (x, y) -> (-x, -y)
  const double a = 1.0, b = 1.7, h = 1e-4;
  for (auto [m, n] : {std::pair{1, 0}, {2, 3}, {0, 1}}) {
    auto u = [&](double x, double y) { return std::cos(pi * (m * x / a + n * y / b)); };
    const double x = 0.31, y = -0.27;
    const double lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4 * u(x, y)) / (h * h);
    const double l = pi * std::sqrt(m * m / (a * a) + n * n / (b * b));
    CHECK(-lap == doctest::Approx(l * l * u(x, y)).epsilon(1e-5));
    CHECK(u(-x, -y) == doctest::Approx(u(x, y)));
  }
}

TEST_CASE("counting function and Weyl law") {
  const PillowcaseSurface sq{1, 1};
  CHECK(sq.area() == 2.0);
  const auto s = pillowcase_spectrum(sq, 400);
  CHECK(std::abs(double(counting_function(s, 20)) / weyl_count(2, 20) - 1) < 0.05);
  CHECK(weyl_count(2, 20) == doctest::Approx(400 / (2 * pi)));
  CHECK(std::abs(double(counting_function(s, 400)) / weyl_count(2, 400) - 1) < 0.05);
  CHECK(counting_function(s, 0.0) == 1);
  CHECK(counting_function(s, pi) == 3);
}

TEST_CASE("mollified trace") {
  const Mollifier m(0.05);
  const std::vector<double> ts{0.0, 0.7, 3.1};
  Spectrum empty;
  empty.lambda_max = 1000;
  for (auto v : mollified_trace(empty, ts, m)) CHECK(v == cplx(0.0));

  Spectrum one;
  one.frequencies = {7.5};
  one.multiplicities = {1};
  one.lambda_max = 1000;
  const auto v = mollified_trace(one, ts, m);
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK(std::abs(v[i] - std::polar(std::exp(-0.5 * 0.05 * 0.05 * 56.25), -ts[i] * 7.5)) < 1e-15);

  const auto s = pillowcase_spectrum({1, 1}, 100);
  try {
    mollified_trace(s, ts, m);
    FAIL("expected IncompleteSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IncompleteSpectrum);
  }

  // against a long double reference sum
  const auto full = pillowcase_spectrum({1, 1.3}, 200);
  const auto tr = mollified_trace(full, ts, m);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    long double re = 0, im = 0;
    for (std::size_t j = 0; j < full.frequencies.size(); ++j) {
      const long double l = full.frequencies[j];
      const long double w = full.multiplicities[j] * std::exp(-0.5L * 0.0025L * l * l);
      re += w * std::cos((long double)ts[i] * l);
      im -= w * std::sin((long double)ts[i] * l);
    }
    CHECK(std::abs(tr[i] - cplx(double(re), double(im))) < 1e-11 * std::abs(cplx(double(re), double(im))) + 1e-12);
  }
}

TEST_CASE("closed geodesics show up as peaks") {
  const PillowcaseSurface sq{1, 1};
  const double h = 0.05;
  const auto s = pillowcase_spectrum(sq, 150);
  std::vector<double> ts;
  for (double t = 0.5; t <= 5.0; t += h / 4) ts.push_back(t);
  const auto tr = mollified_trace(s, ts, Mollifier(h));
  std::vector<double> mag(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) mag[i] = std::abs(tr[i]);
  const auto lengths = pillowcase_lengths(sq, 5.2);
  CHECK(std::find_if(lengths.begin(), lengths.end(), [](double l) { return std::abs(l - 2) < 1e-12; }) != lengths.end());
  const auto peaks = detect_peaks(ts, mag, 0.1 * *std::max_element(mag.begin(), mag.end()));
  for (double want : {2.0, 2 * std::sqrt(2.0), 4.0}) {
    const bool found = std::any_of(peaks.begin(), peaks.end(), [&](const Peak& p) { return std::abs(p.t - want) < 2 * h; });
    INFO("length " << want);
    CHECK(found);
  }
  for (const auto& p : peaks) {
    double best = 1e300;
    for (double l : lengths) best = std::min(best, std::abs(p.t - l));
    CHECK(best < 2 * h);
  }
}

TEST_CASE("peak detection") {
  std::vector<double> ts, y;
  for (int i = 0; i <= 400; ++i) {
    const double t = i * 0.01;
    ts.push_back(t);
    y.push_back(std::exp(-50 * (t - 1) * (t - 1)) + 0.5 * std::exp(-50 * (t - 3) * (t - 3)) + 0.01 * std::sin(40 * t));
  }
  const auto p = detect_peaks(ts, y, 0.2);
  REQUIRE(p.size() == 2);
  CHECK(p[0].t == doctest::Approx(1.0).epsilon(0.02));
  CHECK(p[1].t == doctest::Approx(3.0).epsilon(0.02));
  CHECK(p[1].prominence == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("singularity coefficient fit") {
  const double h = 0.05, L = 2.0;
  const Mollifier m(h);
  std::vector<double> ts;
  for (double t = L - 8 * h; t <= L + 8 * h; t += h / 8) ts.push_back(t);
  const cplx c0(0.0, 0.03);
  std::vector<cplx> v(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) v[i] = c0 * mollified_inverse_power(m, ts[i], L, -1.0);
  const auto fit = extract_singularity_coefficient(ts, v, L, h, -1.0);
  CHECK(std::abs(fit.coefficient - c0) < 1e-6);
  CHECK(fit.valid);
  CHECK(fit.residual_ratio < 1e-10);

  // 5% white noise (relative to the peak), 100 trials
  std::mt19937_64 rng(99);
  double peak = 0;
  for (auto x : v) peak = std::max(peak, std::abs(x));
  std::normal_distribution<double> g(0.0, 0.05 * peak);
  int good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cplx> noisy(v);
    for (auto& x : noisy) x += cplx(g(rng), g(rng));
    good += std::abs(extract_singularity_coefficient(ts, noisy, L, h, -1.0).coefficient - c0) < 0.1 * std::abs(c0);
  }
  CHECK(good == 100);

  // order -1/2 model as well
  for (std::size_t i = 0; i < ts.size(); ++i) v[i] = c0 * mollified_inverse_power(m, ts[i], L, -0.5);
  CHECK(std::abs(extract_singularity_coefficient(ts, v, L, h, -0.5).coefficient - c0) < 1e-6);
}

TEST_CASE("fit window contamination on the pillowcase") {
  const PillowcaseSurface sq{1, 1};
  const auto lengths = pillowcase_lengths(sq, 10);
  std::vector<double> ts{1.9, 2.0, 2.1};
  std::vector<cplx> v(3, 1.0);
  for (double h : {0.11, 0.2}) {
    try {
      extract_singularity_coefficient(ts, v, 2.0, h, -1.0, lengths);
      FAIL("expected WindowContaminated");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::WindowContaminated);
    }
  }
  // at h = 0.02 the window is clean and the fit runs on the computed spectrum
  const double h = 0.02;
  const auto s = pillowcase_spectrum(sq, 400);
  ts.clear();
  for (double t = 2 - 8 * h; t <= 2 + 8 * h; t += h / 4) ts.push_back(t);
  const auto tr = mollified_trace(s, ts, Mollifier(h));
  const auto fit = extract_singularity_coefficient(ts, tr, 2.0, h, -1.0, lengths);
  CHECK(fit.samples >= 40);
  CHECK(std::isfinite(fit.residual_ratio));
}

TEST_CASE("trace pipeline") {
  const auto r = trace_pipeline_check(3, 1);
  CHECK(r.psi_uu_fd == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(r.psi_uu_exact == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(r.limit_incoming == doctest::Approx(1 / (2 * pi)));
  CHECK(r.limit_outgoing == doctest::Approx(-1 / (2 * pi)));
  CHECK(r.pass);
  CHECK(std::abs(r.coefficient - predict_two_diffraction_singularity(3, 1).coefficient) < 1e-10 * std::abs(r.coefficient));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uL(1, 10), uf(0.05, 0.95), uw(0.5, 50);
  for (int i = 0; i < 20; ++i) {
    const double L = uL(rng), b = uf(rng) * L, w = uw(rng);
    const auto q = trace_pipeline_check(L, b, w);
    CHECK(q.pass);
    CHECK(q.rel_err < 1e-10);
    CHECK(q.hessian_identity_err < 1e-6);
    const auto swapped = trace_pipeline_check(L, L - b, w);
    CHECK(std::abs(swapped.coefficient - q.coefficient) < 1e-10 * std::abs(q.coefficient));
  }
}

}
