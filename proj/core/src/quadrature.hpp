#pragma once

// Adaptive Gauss-Kronrod (7/15) for vector-valued integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace conewave::detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, err;
  std::vector<double> val;
  bool operator<(const Panel& o) const { return err < o.err; }
};

// f(x, out) fills out (size n). Returns integral; err receives the final
// absolute error estimate (max over components).
template <class F>
Panel gk15_panel(F& f, double a, double b, std::size_t n, std::vector<double>& buf) {
  Panel p{a, b, 0.0, std::vector<double>(n, 0.0)};
  std::vector<double> g(n, 0.0);
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  auto add = [&](double x, double wk, double wg) {
    f(x, buf);
    for (std::size_t i = 0; i < n; ++i) {
      p.val[i] += wk * buf[i];
      g[i] += wg * buf[i];
    }
  };
  add(c, kWgk[7], kWg[3]);
  for (int j = 0; j < 7; ++j) {
    double wg = (j % 2 == 1) ? kWg[j / 2] : 0.0;
    add(c - hw * kXgk[j], kWgk[j], wg);
    add(c + hw * kXgk[j], kWgk[j], wg);
  }
  for (std::size_t i = 0; i < n; ++i) {
    p.val[i] *= hw;
    g[i] *= hw;
    p.err = std::max(p.err, std::abs(p.val[i] - g[i]));
  }
  return p;
}

template <class F>
std::vector<double> integrate_vector(F&& f, const std::vector<double>& breaks, std::size_t n,
                                     double rel_tol, double abs_floor, int max_panels,
                                     double* err_out) {
  std::vector<double> buf(n);
  std::priority_queue<Panel> q;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
    q.push(gk15_panel(f, breaks[k], breaks[k + 1], n, buf));
  auto totals = [&](std::vector<double>& sum, double& err) {
    auto copy = q;
    std::fill(sum.begin(), sum.end(), 0.0);
    err = 0.0;
    while (!copy.empty()) {
      const auto& p = copy.top();
      for (std::size_t i = 0; i < n; ++i) sum[i] += p.val[i];
      err += p.err;
      copy.pop();
    }
  };
  std::vector<double> sum(n);
  double err = 0.0;
  totals(sum, err);
  int panels = int(q.size());
  while (panels < max_panels) {
    double scale = 0.0;
    for (double v : sum) scale = std::max(scale, std::abs(v));
    if (err <= std::max(rel_tol * scale, abs_floor)) break;
    Panel worst = q.top();
    q.pop();
    double m = 0.5 * (worst.a + worst.b);
    Panel l = gk15_panel(f, worst.a, m, n, buf), r = gk15_panel(f, m, worst.b, n, buf);
    for (std::size_t i = 0; i < n; ++i) sum[i] += l.val[i] + r.val[i] - worst.val[i];
    err += l.err + r.err - worst.err;
    q.push(std::move(l));
    q.push(std::move(r));
    ++panels;
  }
  totals(sum, err);  // resum to shed accumulated drift
  if (err_out) *err_out = err;
  return sum;
}

} // namespace conewave::detail
