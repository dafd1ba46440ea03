#include <doctest.h>

#include <cmath>
#include <random>

#include "conewave/diffraction.hpp"
#include "conewave/errors.hpp"
#include "conewave/two_diffraction.hpp"

using namespace conewave;

namespace {

ConeChain unit_chain() {
  ConeChain ch;
  ch.a = ch.b = ch.c = 1.0;
  ch.alpha1 = ch.alpha2 = 3 * pi;
  ch.eps1 = -1;
  ch.eps2 = 1;
  return ch;
}

// endpoint at chart polar coordinates (r, theta) about vertex `which`
PlanarPoint at_polar(const ConeChain& ch, int which, double r, double th) {
  const double x0 = which == 1 ? ch.b : 0.0;
  const int eps = which == 1 ? ch.eps1 : ch.eps2;
  return {x0 + r * std::cos(th), eps * r * std::sin(th)};
}

} // namespace

TEST_SUITE("two_diffraction") {

TEST_CASE("phases") {
  ConeChain ch = unit_chain();
  ch.b = 2.0;
  CompositionPoint cp;
  cp.chain = ch;
  cp.q2 = {-1, 0};
  cp.q1 = {3, 0};
  cp.t0 = 2.0;
  cp.t = 4.0;
  cp.omega1 = cp.omega2 = 1.0;
  CHECK(phase_phi2(cp, {1, 0}) == doctest::Approx(0.0).scale(1e-15));
  CHECK(phase_phi1(cp, {1, 0}) == doctest::Approx(0.0).scale(1e-15));

  cp.s2 = 0.1;
  cp.omega2 = 3.0;
  CHECK(phase_phi2(cp, {1, 0}) == doctest::Approx(3 * (2 * std::sqrt(1.01) - 2)).epsilon(1e-13));
  cp.s1 = 0.1;
  cp.omega1 = 3.0;
  CHECK(phase_phi1(cp, {1, 0}) == doctest::Approx(3 * (2 * std::sqrt(1.01) - 2)).epsilon(1e-13));

  const PlanarPoint q{0.7, 0.2};
  const double f1 = phase_phi1(cp, q), f2 = phase_phi2(cp, q);
  cp.omega1 *= 2;
  cp.omega2 *= 2;
  CHECK(phase_phi1(cp, q) == doctest::Approx(2 * f1).epsilon(1e-14));
  CHECK(phase_phi2(cp, q) == doctest::Approx(2 * f2).epsilon(1e-14));

  CHECK_THROWS_AS(phase_phi2(cp, shifted_vertex(ch, 2, cp.s2)), Error);
}

TEST_CASE("composed phase") {
  const ConeChain ch = unit_chain();
  const PlanarPoint q1{2, 0}, q2{-1, 0};
  CHECK(composed_phase_psi(ch, 3.0, q1, q2, 0, 0, 5.0) == 0.0);
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double s = 0.05 * i;
    const double v = composed_phase_psi(ch, 3.0, q1, q2, s, 0.7 * s, 1.0);
    CHECK(v > prev);
    prev = v;
  }
  // d Psi / d s_i = omega sin(theta_i) at s = 0
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.2, 1.2), ur(0.5, 2.0);
  for (int i = 0; i < 20; ++i) {
    const double th1 = u(rng), th2 = pi + u(rng), w = 2.5;
    const PlanarPoint a = at_polar(ch, 1, ur(rng), th1), b = at_polar(ch, 2, ur(rng), th2);
    const double h = 1e-6;
    const double d1 = (composed_phase_psi(ch, 3, a, b, h, 0, w) - composed_phase_psi(ch, 3, a, b, -h, 0, w)) / (2 * h);
    const double d2 = (composed_phase_psi(ch, 3, a, b, 0, h, w) - composed_phase_psi(ch, 3, a, b, 0, -h, w)) / (2 * h);
    CHECK(d1 == doctest::Approx(w * std::sin(th1)).scale(1.0).epsilon(1e-8));
    CHECK(d2 == doctest::Approx(w * std::sin(th2)).scale(1.0).epsilon(1e-8));
  }
}

TEST_CASE("stationary elimination") {
  ConeChain ch = unit_chain();
  ch.b = 2.0;
  CompositionPoint cp = default_composition(ch, 2.0);
  const auto sd = stationary_eliminate(cp);
  CHECK(sd.A == doctest::Approx(1.0));
  CHECK(sd.B == doctest::Approx(1.0));
  CHECK(sd.C == doctest::Approx(2.0));
  CHECK(sd.hessian_det == doctest::Approx(-4.0));
  CHECK(sd.signature == 1);

  std::array<double, 3> ev{};
  CHECK(matrix_signature(composition_hessian(0.5, 2.0, 1.0), &ev) == 1);
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] < 0);
  CHECK(ev[1] > 0);
  CHECK(ev[2] > 0);

  // the split time must leave the critical point inside the segment
  cp.t0 = 0.5;
  try {
    stationary_eliminate(cp);
    FAIL("expected NoInteriorCriticalPoint");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoInteriorCriticalPoint);
  }
}

TEST_CASE("critical point is collinear with the shifted vertices") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> us(0, 0.3);
  CompositionPoint cp = default_composition(unit_chain(), 1.0);
  for (int i = 0; i < 200; ++i) {
    cp.s1 = us(rng);
    cp.s2 = us(rng);
    const auto sd = stationary_eliminate(cp);
    const double cross = (sd.q_c.x - sd.P2.x) * (sd.P1.y - sd.P2.y) - (sd.q_c.y - sd.P2.y) * (sd.P1.x - sd.P2.x);
    CHECK(std::abs(cross) < 1e-10);
    CHECK(sd.A + sd.B == doctest::Approx(distance(sd.P1, sd.P2)).epsilon(1e-14));
    // the q-gradient of phi1 + phi2 vanishes there
    const double h = 1e-6;
    const double gx = (phase_phi1(cp, {sd.q_c.x + h, sd.q_c.y}) + phase_phi2(cp, {sd.q_c.x + h, sd.q_c.y}) -
                       phase_phi1(cp, {sd.q_c.x - h, sd.q_c.y}) - phase_phi2(cp, {sd.q_c.x - h, sd.q_c.y})) / (2 * h);
    const double gy = (phase_phi1(cp, {sd.q_c.x, sd.q_c.y + h}) + phase_phi2(cp, {sd.q_c.x, sd.q_c.y + h}) -
                       phase_phi1(cp, {sd.q_c.x, sd.q_c.y - h}) - phase_phi2(cp, {sd.q_c.x, sd.q_c.y - h})) / (2 * h);
    CHECK(std::abs(gx) < 1e-8);
    CHECK(std::abs(gy) < 1e-8);
    // and the omega2 derivative (the phi2 level) vanishes too
    CHECK(std::abs(phase_phi2(cp, sd.q_c)) < 1e-12);
  }
}

TEST_CASE("Hessian of the eliminated phase") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ul(0.5, 2.0), uw(0.5, 5.0);
  for (int i = 0; i < 100; ++i) {
    ConeChain ch = unit_chain();
    ch.a = ul(rng);
    ch.b = ul(rng);
    ch.c = ul(rng);
    CompositionPoint cp = default_composition(ch, uw(rng));
    const auto sd = stationary_eliminate(cp);
    // second differences of phi1 + phi2 in (x along the segment, y across it, omega2)
    const double w1 = cp.omega1;
    auto F = [&](double x, double y, double w2) {
      CompositionPoint c = cp;
      c.omega2 = w2;
      const PlanarPoint q{sd.q_c.x + x, sd.q_c.y + y};
      return phase_phi1(c, q) + phase_phi2(c, q);
    };
    const double h = 1e-4;
    auto d2 = [&](int i, int j) {
      double e[3][3] = {{h, 0, 0}, {0, h, 0}, {0, 0, h}};
      auto at = [&](double si, double sj) {
        return F(si * e[i][0] + sj * e[j][0], si * e[i][1] + sj * e[j][1], w1 + si * e[i][2] + sj * e[j][2]);
      };
      return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
    };
    Matrix3 H;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) H[a][b] = d2(a, b);
    const double det = H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1]) -
                       H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0]) +
                       H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]);
    CHECK(det == doctest::Approx(-sd.C * w1).epsilon(1e-5));
    CHECK(matrix_signature(H) == 1);
    CHECK(sd.hessian_det < 0);
    CHECK(sd.signature == 1);
  }
}

TEST_CASE("amplitude and principal symbol") {
  const ConeChain ch = unit_chain();
  const PlanarPoint q1 = at_polar(ch, 1, 1.0, 0.2), q2 = at_polar(ch, 2, 1.0, pi - 0.2);
  const cplx a1 = amplitude_tilde(ch, 3.0, q1, q2, 1.0);
  // assembled from the scattering matrices
  const double s1 = scattering_matrix(3 * pi, -pi - 0.2).value, s2 = scattering_matrix(3 * pi, pi - 0.2).value;
  const cplx ref = std::polar(1.0, pi / 4) * 4.0 * pi * pi * s1 * s2 * std::sin(0.2) * std::sin(pi - 0.2);
  CHECK(std::abs(a1 - ref) < 1e-12 * std::abs(ref));
  // phase e^{i pi/4} times a real number
  CHECK(std::abs((a1 * std::polar(1.0, -pi / 4)).imag()) < 1e-14 * std::abs(a1));
  // degree 3/2 in omega, checked by a log-log fit over 1e2..1e4
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double lw = 2; lw <= 4.0001; lw += 0.25, ++n) {
    const double x = lw * std::log(10.0), y = std::log(std::abs(amplitude_tilde(ch, 3, q1, q2, std::exp(x))));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(std::abs(slope - 1.5) < 0.02);

  // principal symbol: degree -1/2, b -> 4b halves it
  const cplx p = principal_symbol_lambda0(ch, 0.2, pi - 0.2, 1.0);
  CHECK(std::abs(principal_symbol_lambda0(ch, 0.2, pi - 0.2, 4.0)) == doctest::Approx(std::abs(p) / 2));
  ConeChain wide = ch;
  wide.b = 4.0;
  CHECK(std::abs(principal_symbol_lambda0(wide, 0.2, pi - 0.2, 1.0)) == doctest::Approx(std::abs(p) / 2));
  CHECK_THROWS_AS(principal_symbol_lambda0(ch, 0.0, pi - 0.2, 1.0), Error);

  // principal symbol = a~ / (Psi_s1 Psi_s2) times the Jacobian sqrt(r1 r2) / (2 pi b)
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ut(0.2, 1.2), ur(0.5, 2.0), uw(0.5, 20.0);
  for (int i = 0; i < 5; ++i) {
    ConeChain c = ch;
    c.b = ur(rng);
    const double th1 = ut(rng), th2 = pi - ut(rng), r1 = ur(rng), r2 = ur(rng), w = uw(rng);
    const cplx at = amplitude_tilde(c, 3, at_polar(c, 1, r1, th1), at_polar(c, 2, r2, th2), w);
    const double psis = w * std::sin(th1) * w * std::sin(th2);
    const cplx ratio = principal_symbol_lambda0(c, th1, th2, w) / (at / psis);
    CHECK(std::abs(ratio - std::sqrt(r1 * r2) / (2 * pi * c.b)) < 1e-10 * std::abs(ratio));
  }
  CHECK(std::string(kPrincipalSymbolHalfDensity) == "|dr1 dtheta1 dtheta2 domega|^{1/2}");
}

TEST_CASE("nondegeneracy") {
  const ConeChain ch = unit_chain();
  const auto sys = nondegeneracy_system(ch, {2, 0}, {-1, 0}, 1.0);
  CHECK(sys.pass);
  CHECK(sys.rows == 3);
  CHECK(sys.cols == 8);

  // geometric-diffractive pair on C_3pi: q2 opposite q1 through the vertex
  const auto pair = nondegeneracy_pair(1, {1.3, 0.0}, {-0.8, 0.0}, 1.0);
  CHECK(pair.pass);

  // two parameters entering only through their sum
  auto dup = [](const std::vector<double>& z, const std::vector<double>& th) {
    return (th[0] + th[1]) * (z[0] * z[0] + z[1] - 1.0);
  };
  const auto bad = nondegeneracy_check(dup, {0.5, 0.3}, {1.0, 2.0});
  CHECK_FALSE(bad.pass);
  CHECK(bad.sigma_min < 1e-6);
}

TEST_CASE("four fronts") {
  const ConeChain ch = unit_chain();  // eps1 = -1, eps2 = +1
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uu(0.1, 0.3), uv(0.6, 1.8), ux(-0.2, 0.2);
  for (int i = 0; i < 20; ++i) {
    // q2 below the axis, q1 above: every restricted minimiser is interior
    const double u2 = uu(rng);
    const PlanarPoint q2{-1 + ux(rng), -u2}, q1{2 + ux(rng), u2 * uv(rng)};
    for (auto k : {FrontKind::lambda0, FrontKind::lambda1, FrontKind::lambda2, FrontKind::lambda3}) {
      const auto fp = stationary_front(ch, q1, q2, k);
      CHECK(std::abs(fp.t_stationary - fp.t_explicit) < 1e-8);
    }
    const auto f3 = stationary_front(ch, q1, q2, FrontKind::lambda3);
    CHECK(f3.s1 > 0);
    CHECK(f3.s2 > 0);
  }
}

TEST_CASE("stationary phase value") {
  const ConeChain ch = unit_chain();
  CompositionPoint cp = default_composition(ch, 50.0);
  const cplx v = stationary_phase_value(cp);
  // independent of the split time
  cp.t0 = ch.a + ch.b / 3;
  CHECK(std::abs(stationary_phase_value(cp) - v) < 1e-12 * std::abs(v));
  // unit amplitude: the Gaussian integral (2 pi)^{3/2} |det H|^{-1/2} e^{i pi sig / 4} e^{i Psi},
  // with Psi = 0 on the front
  const auto sd = stationary_eliminate(cp);
  const cplx unit = std::pow(2 * pi, 1.5) / std::sqrt(std::abs(sd.hessian_det)) * std::polar(1.0, pi / 4 * sd.signature);
  CHECK(std::abs(stationary_phase_value(cp, true) - unit) < 1e-12 * std::abs(unit));
}

TEST_CASE("oscillatory oracle") {
  const ConeChain ch = unit_chain();
  CompositionPoint cp = default_composition(ch, 100.0);
  OracleOptions opt;
  opt.unit_amplitude = true;
  opt.rel_tol = 1e-6;
  const cplx sp = stationary_phase_value(cp, true);
  const cplx o = oscillatory_oracle(cp, opt).value;
  CHECK(std::abs(o - sp) < 5e-2 * std::abs(sp));
  // another split time moves the window and C; with unit amplitude the
  // prediction moves with it
  cp.t0 = ch.a + ch.b / 3;
  const cplx sp3 = stationary_phase_value(cp, true);
  CHECK(std::abs(oscillatory_oracle(cp, opt).value - sp3) < 5e-2 * std::abs(sp3));
}

TEST_CASE("oracle does not depend on the split time") {
  const ConeChain ch = unit_chain();
  CompositionPoint cp = default_composition(ch, 200.0);
  OracleOptions opt;
  opt.rel_tol = 1e-6;
  const cplx sp = stationary_phase_value(cp);
  for (double t0 : {0.0, ch.a + ch.b / 3}) {
    cp.t0 = t0;
    CHECK(std::abs(oscillatory_oracle(cp, opt).value - sp) < 2.5e-2 * std::abs(sp));
  }
}

}
