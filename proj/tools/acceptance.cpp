#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>

#include "conewave/cone_geometry.hpp"
#include "conewave/cone_wave_kernel.hpp"
#include "conewave/diffraction.hpp"
#include "conewave/errors.hpp"
#include "conewave/two_diffraction.hpp"
#include "conewave/wave_trace.hpp"

namespace conewave::cli {

namespace {

using Rng = std::mt19937_64;

struct Ctx {
  Rng rng;
  std::map<std::string, double> tol;
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double operator[](const std::string& k) const { return tol.at(k); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ------------------------------------------------------------------ AT-1

AcceptanceRow at1(Ctx& c) {
  const double alpha = 4 * pi;
  double worst = 0.0;
  int counts[3] = {0, 0, 0};
  int n = 0;
  while (n < 200) {
    const int region = n % 3;
    ConePoint q1{c.uniform(0.2, 2.5), c.uniform(0, alpha)};
    ConePoint q2{c.uniform(0.2, 2.5), c.uniform(0, alpha)};
    const double d = cone_distance(alpha, q1, q2), s = q1.r + q2.r;
    KernelQuery q{0, q1, q2, 0.0};
    if (region == 0) {
      q.t = c.uniform(0.05, d);
    } else if (region == 1) {
      if (s - d < 0.01) continue;
      q.t = c.uniform(d, s);
    } else {
      q.t = c.uniform(s, s + 3);
    }
    if (std::abs(q.t - d) < 1e-4 || std::abs(q.t - s) < 1e-4) continue;
    const double closed = sine_kernel_4pi_closed(q).value.real();
    const double moving = sine_kernel_moving_point(q).value.real();
    const double e = closed == 0.0 ? std::abs(moving) : rel(moving, closed);
    worst = std::max(worst, e);
    ++counts[region];
    ++n;
  }
  const bool ok = worst < c["at1_rel"];
  return {"AT-1", ok ? Status::pass : Status::fail,
          fmt("moving point vs closed form, 200 points (%d/%d/%d per region), max rel err %.3g",
              counts[0], counts[1], counts[2], worst)};
}

// ------------------------------------------------------------------ AT-2

AcceptanceRow at2(Ctx& c) {
  const auto fg4 = build_friedlander(4 * pi);
  const auto fg2 = build_friedlander(2 * pi);
  double w4 = 0.0, w2 = 0.0;
  for (int n = 0; n < 20;) {
    ConePoint q1{c.uniform(0.5, 2.0), c.uniform(0, 4 * pi)};
    ConePoint q2{c.uniform(0.5, 2.0), c.uniform(0, 4 * pi)};
    const double d = cone_distance(4 * pi, q1, q2), s = q1.r + q2.r;
    // keep y = (t^2 - r1^2 - r2^2) / (2 r1 r2) inside the default grid
    const double t_top = std::min(s + 1.5, std::sqrt(q1.r * q1.r + q2.r * q2.r + 11 * q1.r * q2.r));
    KernelQuery q{c.uniform(d + 0.1, t_top), q1, q2, 0.0};
    if (std::abs(q.t - s) < 0.1) continue;
    w4 = std::max(w4, rel(sine_kernel_friedlander(fg4, q).value.real(),
                          sine_kernel_4pi_closed(q).value.real()));
    ++n;
  }
  for (int n = 0; n < 20; ++n) {
    ConePoint q1{c.uniform(0.5, 2.0), c.uniform(0, 2 * pi)};
    ConePoint q2{c.uniform(0.5, 2.0), c.uniform(0, 2 * pi)};
    const double d = cone_distance(2 * pi, q1, q2);
    const double t_top = std::sqrt(q1.r * q1.r + q2.r * q2.r + 11 * q1.r * q2.r);
    KernelQuery q{c.uniform(d + 0.1, std::min(d + 2.0, t_top)), q1, q2, 0.0};
    w2 = std::max(w2, rel(sine_kernel_friedlander(fg2, q).value.real(),
                          sine_kernel_plane(q).value.real()));
  }
  const bool ok = w4 < c["at2_rel"] && w2 < c["at2_rel"];
  return {"AT-2", ok ? Status::pass : Status::fail,
          fmt("Friedlander vs closed form: max rel err %.3g (4pi), %.3g (plane)", w4, w2)};
}

// ------------------------------------------------------------------ AT-3

AcceptanceRow at3(Ctx& c) {
  const double alphas[] = {pi, 3 * pi, 4 * pi, 7.0};
  const int N = int(c["at3_cesaro_N"]);
  double wf = 0.0;
  for (double alpha : alphas) {
    auto near_pole = [&](double th) {
      for (double p : {pi, -pi}) {
        double d = std::remainder(th - p, alpha);
        if (std::abs(d) < 0.1) return true;
      }
      return false;
    };
    for (int n = 0; n < 100;) {
      const double th = c.uniform(-alpha / 2, alpha / 2);
      if (near_pole(th)) continue;
      const double closed = scattering_matrix(alpha, th).value;
      const cplx four = scattering_matrix_fourier(alpha, th, N, true);
      wf = std::max(wf, std::abs(four - closed));
      ++n;
    }
  }
  double w4 = 0.0;
  for (int n = 0; n < 100; ++n) {
    const double th = c.uniform(-0.95 * pi, 0.95 * pi);
    const double ref = -1.0 / (4 * pi * std::cos(th / 2));
    w4 = std::max({w4, rel(scattering_4pi(th), ref), rel(scattering_matrix(4 * pi, th).value, ref)});
  }
  // numerical limits, symmetric offsets +-1e-6 so the linear term cancels
  double wl = 0.0;
  for (double alpha : {3 * pi, 4 * pi, 7.0}) {
    for (auto [which, target] : {std::pair{SineProduct::incoming_at_0, 1 / (2 * pi)},
                                 std::pair{SineProduct::outgoing_at_pi, -1 / (2 * pi)}}) {
      const double th0 = which == SineProduct::incoming_at_0 ? 0.0 : pi;
      const double lim = 0.5 * (sine_scattering_product(alpha, which, th0 + 1e-6) +
                                sine_scattering_product(alpha, which, th0 - 1e-6));
      wl = std::max({wl, std::abs(lim - target),
                     std::abs(regularized_sine_product(alpha, which) - target)});
    }
  }
  const bool ok = wf < c["at3_fourier"] && w4 < c["at3_s4pi"] && wl < c["at3_limits"];
  return {"AT-3", ok ? Status::pass : Status::fail,
          fmt("Cesaro(N=%d) vs closed max abs err %.3g; S_4pi rel err %.3g; limits err %.3g "
              "(alpha in {3pi,4pi,7}; S_pi vanishes identically)",
              N, wf, w4, wl)};
}

// ------------------------------------------------------------------ AT-4

AcceptanceRow at4(Ctx& c) {
  const ConeChain chain;  // (1,1,1), alpha = 3pi
  double dev[3];
  const double omegas[] = {100, 200, 400};
  for (int i = 0; i < 3; ++i) {
    auto cp = default_composition(chain, omegas[i]);
    const cplx sp = stationary_phase_value(cp);
    const cplx orc = oscillatory_oracle(cp).value;
    dev[i] = std::abs(orc - sp) / std::abs(sp);
  }
  const double r1 = dev[1] / dev[0], r2 = dev[2] / dev[1];

  // Hessian of Phi1 + Phi2 in (x, y, omega2) by central differences
  int bad = 0;
  double worst_det = 0.0;
  int rejected = 0;
  for (int n = 0; n < 100;) {
    ConeChain ch;
    ch.a = c.uniform(0.5, 2.0);
    ch.b = c.uniform(0.5, 2.0);
    ch.c = c.uniform(0.5, 2.0);
    ch.alpha1 = c.uniform(2.5 * pi, 4.5 * pi);
    ch.alpha2 = c.uniform(2.5 * pi, 4.5 * pi);
    auto cp = default_composition(ch, c.uniform(1.0, 50.0));
    cp.s1 = c.uniform(0.0, 0.3);
    cp.s2 = c.uniform(0.0, 0.3);
    StationaryData sd;
    try {
      sd = stationary_eliminate(cp);
    } catch (const Error&) {
      ++rejected;  // s shift pushed the critical point off the segment
      continue;
    }
    ++n;
    const double w = cp.omega1;
    const double ux = (sd.P1.x - sd.P2.x), uy = (sd.P1.y - sd.P2.y), un = std::hypot(ux, uy);
    auto phi = [&](const std::array<double, 3>& v) {
      const PlanarPoint q{sd.q_c.x + v[0] * ux / un - v[1] * uy / un,
                          sd.q_c.y + v[0] * uy / un + v[1] * ux / un};
      CompositionPoint p = cp;
      p.omega2 = w + v[2];
      return phase_phi1(p, q) + phase_phi2(p, q);
    };
    Matrix3 H{};
    const double st[3] = {1e-4, 1e-4, 1e-2};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        auto at = [&](double si, double sj) {
          std::array<double, 3> v{0, 0, 0};
          v[i] += si * st[i];
          v[j] += sj * st[j];
          return phi(v);
        };
        H[i][j] = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * st[i] * st[j]);
      }
    const double det = H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1]) -
                       H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0]) +
                       H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]);
    const double e = rel(det, -sd.C * w);
    worst_det = std::max(worst_det, e);
    if (e > c["at4_hessian"] || matrix_signature(H) != 1 || sd.signature != 1 ||
        rel(sd.hessian_det, -sd.C * w) > 1e-12)
      ++bad;
  }
  const bool ok = dev[1] <= c["at4_dev"] && r1 >= 0.3 && r1 <= 0.7 && r2 >= 0.3 && r2 <= 0.7 && bad == 0;
  return {"AT-4", ok ? Status::pass : Status::fail,
          fmt("oracle vs stationary phase: dev %.3g/%.3g/%.3g at omega 100/200/400, ratios %.3f %.3f; "
              "Hessian det rel err %.2g, %d bad of 100 (%d draws rejected)",
              dev[0], dev[1], dev[2], r1, r2, worst_det, bad, rejected)};
}

// ------------------------------------------------------------------ AT-5

AcceptanceRow at5(Ctx& c) {
  const double h = 0.02, step = 1e-3;
  const Mollifier m(h);
  struct Sample {
    ConePoint q1, q2;
    double dt, dir;
  };
  const Sample samples[] = {{{1.0, 0.2}, {1.3, 2.0}, 0.01, 0.0},
                            {{1.0, 0.2}, {1.3, 2.0}, 0.0, 0.7},
                            {{0.8, -0.5}, {1.5, 1.5}, -0.01, 2.0},
                            {{1.2, 0.4}, {0.9, 2.9}, 0.02, -1.0},
                            {{1.5, -1.0}, {1.1, 1.0}, 0.005, 1.3}};
  double worst = 0.0;
  for (const auto& s : samples) {
    const double t = s.q1.r + s.q2.r + s.dt;
    auto shift = [&](const ConePoint& p, double e) {
      const double x = p.r * std::cos(p.theta) + e * std::cos(s.dir);
      const double y = p.r * std::sin(p.theta) + e * std::sin(s.dir);
      return ConePoint{std::hypot(x, y), std::atan2(y, x)};
    };
    auto E = [&](double e) {
      return sine_kernel_4pi_closed({t, shift(s.q1, e), shift(s.q2, e), h}).value.real();
    };
    const double fd = (E(step) - E(-step)) / (2 * step);
    worst = std::max(worst, rel(fd, upsilon0(t, s.q1, s.q2, s.dir, m)));
  }
  // l_{+-1}: conjugation, support, peak value
  double conj_err = 0.0, support = 0.0;
  for (int n = 0; n < 20; ++n) {
    const ConePoint q{c.uniform(0.3, 2.0), c.uniform(0, 4 * pi)};
    const double t = q.r + c.uniform(-4 * h, 4 * h);
    conj_err = std::max(conj_err, std::abs(spherical_wave_l(-1, t, q, m) -
                                           std::conj(spherical_wave_l(1, t, q, m))));
    const double far = q.r + (n % 2 ? 1 : -1) * c.uniform(10.5 * h, 1.0);
    if (far > 0) support = std::max(support, std::abs(spherical_wave_l(1, far, q, m)));
  }
  const double peak_ref = 1.0 / (4 * pi * std::sqrt(1.5) * std::sqrt(2 * pi) * h);
  const double peak_err = std::abs(spherical_wave_l(1, 1.5, {1.5, 0.0}, m) - peak_ref) / peak_ref;
  const double ups_far = std::abs(upsilon0(4.0, {1.0, 0.2}, {1.3, 2.0}, 0.0, m));
  const bool ok = worst < c["at5_rel"] && conj_err < 1e-14 && support < 1e-10 && peak_err < 1e-12 &&
                  ups_far < 1e-10;
  return {"AT-5", ok ? Status::pass : Status::fail,
          fmt("Upsilon0 vs finite-difference commutator max rel err %.3g at 5 points; "
              "l(-1)-conj l(+1) %.2g, support %.2g, peak err %.2g",
              worst, conj_err, support, peak_err)};
}

// ------------------------------------------------------------------ AT-6

AcceptanceRow at6(Ctx& c) {
  double worst = 0.0, worst_h = 0.0;
  bool all = true;
  for (int n = 0; n < 20; ++n) {
    const double L = c.uniform(0.5, 10.0);
    const double b = L * c.uniform(0.05, 0.95);
    const auto r = trace_pipeline_check(L, b, c.uniform(0.5, 5.0));
    worst = std::max(worst, r.rel_err);
    worst_h = std::max(worst_h, r.hessian_identity_err);
    all = all && r.pass;
  }
  const auto r31 = trace_pipeline_check(3.0, 1.0, 1.0);
  const double uu = std::abs(r31.psi_uu_fd - 1.5) / 1.5;
  const bool ok = all && worst < c["at6_rel"] && worst_h < c["at6_hessian"] && uu < 1e-6;
  return {"AT-6", ok ? Status::pass : Status::fail,
          fmt("pipeline vs formula max rel err %.3g over 20 (L,b); Hessian identity err %.3g; "
              "psi_uu(3,1) = %.9f",
              worst, worst_h, r31.psi_uu_fd)};
}

// ------------------------------------------------------------------ AT-7

std::vector<AcceptanceRow> at7(Ctx& c) {
  const double h = 0.02, lam = 400.0;
  const PillowcaseSurface surf{1.0, 1.0};
  const auto spec = pillowcase_spectrum(surf, lam);
  const long long count = counting_function(spec, lam);
  const double weyl = weyl_count(surf.area(), lam);
  const double weyl_err = std::abs(count - weyl) / weyl;

  std::vector<double> ts;
  for (double t = 0.5; t <= 8.0 + 1e-12; t += h / 4) ts.push_back(t);
  const auto tr = mollified_trace(spec, ts, Mollifier(h));
  std::vector<double> mag(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) mag[i] = std::abs(tr[i]);
  const auto lengths = pillowcase_lengths(surf, 9.0);
  auto nearest = [&](double t) {
    double best = 1e300;
    for (double l : lengths)
      if (std::abs(l - t) < std::abs(best - t)) best = l;
    return best;
  };
  std::vector<double> quiet;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(nearest(ts[i]) - ts[i]) > 20 * h) quiet.push_back(mag[i]);
  std::nth_element(quiet.begin(), quiet.begin() + quiet.size() / 2, quiet.end());
  const double floor = quiet.empty() ? 0.0 : quiet[quiet.size() / 2];
  const auto peaks = detect_peaks(ts, mag, 3 * floor);
  int stray = 0;
  double worst_off = 0.0;
  for (const auto& p : peaks) {
    const double off = std::abs(nearest(p.t) - p.t);
    worst_off = std::max(worst_off, off);
    if (off > c["at7_peak_h"] * h) ++stray;
  }
  const bool ok = weyl_err < c["at7_weyl"] && stray == 0 && !peaks.empty();
  AcceptanceRow main{"AT-7", ok ? Status::pass : Status::fail,
                     fmt("pillowcase 1x1: N(400) = %lld vs Weyl %.1f (err %.3g); %zu peaks, "
                         "max offset from length set %.3g h, %d stray",
                         count, weyl, weyl_err, peaks.size(), worst_off / h, stray)};

  // part (iii): doubled edge between two cone points, L = 2, b = 1
  const auto pred = predict_two_diffraction_singularity(2.0, 1.0);
  std::string info;
  try {
    const auto fit = extract_singularity_coefficient(ts, tr, 2.0, h, -1.0, lengths);
    info = fmt("fit at L=2 (order -1): c = %.6g%+.6gi, residual ratio %.3g (%s); predicted %.6g%+.6gi",
               fit.coefficient.real(), fit.coefficient.imag(), fit.residual_ratio,
               fit.valid ? "VALID" : "not VALID", pred.coefficient.real(), pred.coefficient.imag());
  } catch (const Error& e) {
    info = std::string("fit at L=2: ") + e.what();
  }
  return {main, {"AT-7(iii)", Status::info, info}};
}

bool selected(const AcceptanceOptions& opt, const std::string& id) {
  return opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), id) != opt.only.end();
}

} // namespace

const char* status_name(Status s) noexcept {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::info: return "INFO";
  }
  return "?";
}

std::map<std::string, double> default_tolerances() {
  return {{"at1_rel", 1e-10},   {"at2_rel", 1e-2},    {"at3_fourier", 1e-3},
          {"at3_s4pi", 1e-12},  {"at3_limits", 1e-10}, {"at3_cesaro_N", 2e5},
          {"at4_dev", 5e-2},    {"at4_hessian", 1e-6}, {"at5_rel", 5e-2},
          {"at6_rel", 1e-10},   {"at6_hessian", 1e-6}, {"at7_weyl", 5e-2},
          {"at7_peak_h", 2.0}};
}

std::vector<AcceptanceRow> run_acceptance(const AcceptanceOptions& opt) {
  auto tol = default_tolerances();
  for (const auto& [k, v] : opt.tol) {
    if (!tol.count(k)) throw std::invalid_argument("unknown tolerance key: " + k);
    tol[k] = v;
  }
  std::vector<AcceptanceRow> rows;
  using Fn = std::function<std::vector<AcceptanceRow>(Ctx&)>;
  auto one = [](AcceptanceRow (*f)(Ctx&)) { return Fn([f](Ctx& c) { return std::vector{f(c)}; }); };
  const std::pair<const char*, Fn> suite[] = {{"AT-1", one(at1)}, {"AT-2", one(at2)},
                                              {"AT-3", one(at3)}, {"AT-4", one(at4)},
                                              {"AT-5", one(at5)}, {"AT-6", one(at6)},
                                              {"AT-7", Fn(at7)}};
  for (std::size_t i = 0; i < std::size(suite); ++i) {
    const auto& [id, fn] = suite[i];
    if (!selected(opt, id)) continue;
    // each test draws from its own stream so --only does not shift the others
    Ctx ctx{Rng(opt.seed * 1000003ULL + i), tol};
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<AcceptanceRow> out;
    try {
      out = fn(ctx);
    } catch (const std::exception& e) {
      out = {{id, Status::fail, std::string("exception: ") + e.what()}};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& r : out) {
      r.seconds = sec;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::string format_row(const AcceptanceRow& r) {
  return fmt("%-10s %-4s %7.1fs  %s", r.id.c_str(), status_name(r.status), r.seconds, r.detail.c_str());
}

bool all_passed(const std::vector<AcceptanceRow>& rows) {
  return std::none_of(rows.begin(), rows.end(), [](const auto& r) { return r.status == Status::fail; });
}

} // namespace conewave::cli
