#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "acceptance.hpp"
#include "conewave/cone_wave_kernel.hpp"
#include "conewave/diffraction.hpp"
#include "conewave/errors.hpp"
#include "conewave/two_diffraction.hpp"
#include "conewave/wave_trace.hpp"
#include "format.hpp"

namespace conewave::cli {

using json = nlohmann::ordered_json;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config, out;
  std::uint64_t seed = 0;
  double h = 0.0, lambda_max = 0.0;
  std::vector<std::string> tol;
  CLI::Option *h_opt = nullptr, *lambda_opt = nullptr;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": malformed JSON");
  }
}

template <class T>
T pick(const CLI::Option* opt, const T& flag, const json& cfg, const char* key, const T& def) {
  if (opt && opt->count() > 0) return flag;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception&) {
      throw InputError(std::string("config field '") + key + "' has the wrong type");
    }
  }
  return def;
}

std::map<std::string, double> parse_tol(const std::vector<std::string>& items) {
  std::map<std::string, double> m;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--tol expects KEY=VAL, got " + it);
    try {
      std::size_t used = 0;
      double v = std::stod(it.substr(eq + 1), &used);
      if (used != it.size() - eq - 1) throw std::invalid_argument(it);
      m[it.substr(0, eq)] = v;
    } catch (const std::logic_error&) {
      throw InputError("--tol value is not a number: " + it);
    }
  }
  return m;
}

// Output sink: file when --out is given, otherwise the supplied stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError("cannot write " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

ConePoint point_from(const json& cfg, const char* key, const ConePoint& def) {
  if (!cfg.contains(key)) return def;
  const auto& j = cfg.at(key);
  if (!j.is_object() || !j.contains("r") || !j.contains("theta"))
    throw InputError(std::string("config field '") + key + "' needs {r, theta}");
  return {j.at("r").get<double>(), j.at("theta").get<double>()};
}

PlanarPoint planar_from(const json& cfg, const char* key, const PlanarPoint& def) {
  if (!cfg.contains(key)) return def;
  const auto& j = cfg.at(key);
  if (!j.is_array() || j.size() != 2) throw InputError(std::string("config field '") + key + "' needs [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<double> range_from(const CLI::Option* opt, const std::string& flag, const json& cfg,
                               const char* key, const std::string& def) {
  if (opt && opt->count() > 0) return parse_range(flag);
  if (cfg.contains(key)) {
    const auto& j = cfg.at(key);
    if (j.is_string()) return parse_range(j.get<std::string>());
    if (j.is_array()) return j.get<std::vector<double>>();
    throw InputError(std::string("config field '") + key + "' must be a range string or array");
  }
  return parse_range(def);
}

ConeChain chain_from(const json& cfg) {
  ConeChain ch;
  if (!cfg.contains("chain")) return ch;
  const auto& j = cfg.at("chain");
  ch.a = j.value("a", ch.a);
  ch.b = j.value("b", ch.b);
  ch.c = j.value("c", ch.c);
  ch.alpha1 = j.value("alpha1", ch.alpha1);
  ch.alpha2 = j.value("alpha2", ch.alpha2);
  ch.eps1 = j.value("eps1", ch.eps1);
  ch.eps2 = j.value("eps2", ch.eps2);
  return ch;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// nlohmann prints doubles with 17 significant digits; swap in the shortest
// round-trip form so output matches the CSV files.
std::string dump(const json& j);

void dump_into(const json& j, std::string& s, int indent, int level) {
  const std::string pad(std::size_t(indent * (level + 1)), ' '), close(std::size_t(indent * level), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      s += "{}";
      return;
    }
    s += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) s += ",\n";
      first = false;
      s += pad + json(it.key()).dump() + ": ";
      dump_into(it.value(), s, indent, level + 1);
    }
    s += "\n" + close + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      s += "[]";
      return;
    }
    const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
    if (flat) {
      s += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) s += ", ";
        dump_into(j[i], s, indent, level + 1);
      }
      s += "]";
      return;
    }
    s += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) s += ",\n";
      s += pad;
      dump_into(j[i], s, indent, level + 1);
    }
    s += "\n" + close + "]";
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    s += std::isfinite(v) ? num(v) : "null";
  } else {
    s += j.dump();
  }
}

std::string dump(const json& j) {
  std::string s;
  dump_into(j, s, 2, 0);
  return s + "\n";
}

// ----------------------------------------------------------------- kernel

int cmd_kernel(const Globals& g, CLI::App& sub, std::ostream& out) {
  const json cfg = load_config(g.config);
  auto opt = [&](const char* n) { return sub.get_option(n); };
  const double alpha = pick(opt("--alpha"), opt("--alpha")->as<double>(), cfg, "alpha", 4 * pi);
  const std::string rep = pick(opt("--representation"), opt("--representation")->as<std::string>(),
                               cfg, "representation", std::string("closed"));
  const double h = pick(g.h_opt, g.h, cfg, "h", 0.0);
  ConePoint q1 = point_from(cfg, "q1", {1.0, 0.0});
  ConePoint q2 = point_from(cfg, "q2", {1.0, pi / 2});
  if (opt("--r1")->count()) q1.r = opt("--r1")->as<double>();
  if (opt("--theta1")->count()) q1.theta = opt("--theta1")->as<double>();
  if (opt("--r2")->count()) q2.r = opt("--r2")->as<double>();
  if (opt("--theta2")->count()) q2.theta = opt("--theta2")->as<double>();
  const auto ts = range_from(opt("--ts"), opt("--ts")->count() ? opt("--ts")->as<std::string>() : "",
                             cfg, "ts", "0.5:0.1:4");
  if (!(alpha > 0)) throw InputError("alpha must be positive");
  if (h < 0) throw InputError("h must be nonnegative");

  const bool needs_4pi = rep == "closed" || rep == "moving" || rep == "halfwave";
  if (needs_4pi && std::abs(alpha - 4 * pi) > 1e-12)
    throw InputError("representation '" + rep + "' exists only for alpha = 4 pi");
  if (rep == "plane" && std::abs(alpha - 2 * pi) > 1e-12)
    throw InputError("representation 'plane' needs alpha = 2 pi");

  std::vector<cplx> vals(ts.size());
  if (rep == "cheeger") {
    if (!(h > 0)) throw InputError("cheeger representation needs --h > 0");
    auto v = sine_kernel_cheeger_series_sweep(alpha, ts, q1, q2, h);
    std::copy(v.begin(), v.end(), vals.begin());
  } else if (rep == "friedlander") {
    const auto fg = build_friedlander(alpha);
    for (std::size_t i = 0; i < ts.size(); ++i)
      vals[i] = sine_kernel_friedlander(fg, {ts[i], q1, q2, h}).value;
  } else {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const KernelQuery q{ts[i], q1, q2, h};
      if (rep == "closed") {
        vals[i] = sine_kernel_4pi_closed(q).value;
      } else if (rep == "moving") {
        if (h != 0.0) throw InputError("moving-point representation is unmollified; use --h 0");
        vals[i] = sine_kernel_moving_point(q).value;
      } else if (rep == "plane") {
        vals[i] = sine_kernel_plane(q).value;
      } else if (rep == "halfwave") {
        if (!(h > 0)) throw InputError("halfwave representation needs --h > 0");
        vals[i] = halfwave_mu_4pi(ts[i], q1, q2, Mollifier(h));
      } else {
        throw InputError("unknown representation '" + rep +
                         "' (closed, cheeger, friedlander, moving, plane, halfwave)");
      }
    }
  }
  const double ftol = h > 0 ? 10 * h : 1e-12;
  out << "t,r1,theta1,r2,theta2,alpha,representation,value_re,value_im,region\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto region = classify_region(alpha, {ts[i], q1, q2, h}, ftol);
    out << csv_row({num(ts[i]), num(q1.r), num(q1.theta), num(q2.r), num(q2.theta), num(alpha), rep,
                    num(vals[i].real()), num(vals[i].imag()), front_region_name(region)})
        << '\n';
  }
  return ok;
}

// ---------------------------------------------------------------- scatter

int cmd_scatter(const Globals& g, CLI::App& sub, std::ostream& out) {
  const json cfg = load_config(g.config);
  auto opt = [&](const char* n) { return sub.get_option(n); };
  const double alpha = pick(opt("--alpha"), opt("--alpha")->as<double>(), cfg, "alpha", 4 * pi);
  const int N = pick(opt("--N"), opt("--N")->as<int>(), cfg, "N", 200000);
  const bool cesaro = !pick(opt("--raw"), true, cfg, "raw", false);
  const auto thetas = range_from(opt("--thetas"),
                                 opt("--thetas")->count() ? opt("--thetas")->as<std::string>() : "",
                                 cfg, "thetas", "0:0.1:3");
  if (!(alpha > 0)) throw InputError("alpha must be positive");
  if (N < 1) throw InputError("N must be >= 1");
  out << "alpha,theta,S_closed,S_fourier_re,S_fourier_im,is_pole\n";
  for (double th : thetas) {
    const auto ev = scattering_matrix(alpha, th);
    const cplx f = scattering_matrix_fourier(alpha, th, N, cesaro);
    out << csv_row({num(alpha), num(th), num(ev.value), num(f.real()), num(f.imag()),
                    ev.is_pole ? "1" : "0"})
        << '\n';
  }
  return ok;
}

// ---------------------------------------------------------------- compose

int cmd_compose(const Globals& g, CLI::App& sub, std::ostream& out) {
  const json cfg = load_config(g.config);
  auto opt = [&](const char* n) { return sub.get_option(n); };
  const ConeChain chain = chain_from(cfg);
  validate_chain(chain);
  const double omega = pick(opt("--omega"), opt("--omega")->as<double>(), cfg, "omega", 200.0);
  if (!(omega > 0)) throw InputError("omega must be positive");
  CompositionPoint cp = default_composition(chain, omega);
  cp.t = cfg.value("t", cp.t);
  cp.t0 = cfg.value("t0", cp.t0);
  cp.s1 = cfg.value("s1", cp.s1);
  cp.s2 = cfg.value("s2", cp.s2);
  cp.q1 = planar_from(cfg, "q1", cp.q1);
  cp.q2 = planar_from(cfg, "q2", cp.q2);
  const double tol = pick(opt("--max-rel-err"), opt("--max-rel-err")->as<double>(), cfg,
                          "max_rel_err", 5e-2);

  const auto sd = stationary_eliminate(cp);
  const cplx sp = stationary_phase_value(cp);
  const auto orc = oscillatory_oracle(cp);
  const double err = std::abs(orc.value - sp) / std::abs(sp);
  const auto p1 = chain_polar(chain, 1, cp.q1), p2 = chain_polar(chain, 2, cp.q2);
  const cplx sym = principal_symbol_lambda0(chain, p1.theta, p2.theta, omega);

  json j;
  j["stationary"] = {{"q_c", json::array({sd.q_c.x, sd.q_c.y})},
                     {"A", sd.A},
                     {"B", sd.B},
                     {"C", sd.C},
                     {"omega", sd.omega},
                     {"hessian_det", sd.hessian_det},
                     {"signature", sd.signature}};
  j["symbol_lambda0"] = complex_json(sym);
  j["stationary_phase"] = complex_json(sp);
  j["oracle"] = complex_json(orc.value);
  j["rel_err"] = err;
  out << dump(j);
  return err <= tol ? ok : verification_failure;
}

// ------------------------------------------------------------------ trace

int cmd_trace(const Globals& g, CLI::App& sub, std::ostream& out, std::ostream& err) {
  const json cfg = load_config(g.config);
  auto opt = [&](const char* n) { return sub.get_option(n); };
  PillowcaseSurface surf;
  if (cfg.contains("surface")) {
    const auto& s = cfg.at("surface");
    if (s.value("type", std::string("pillowcase")) != "pillowcase")
      throw InputError("only pillowcase surfaces are supported");
    surf.a = s.value("a", surf.a);
    surf.b = s.value("b", surf.b);
  }
  const double h = pick(g.h_opt, g.h, cfg, "h", 0.02);
  const double lam = pick(g.lambda_opt, g.lambda_max, cfg, "lambda_max", 400.0);
  const auto ts = range_from(opt("--t-range"),
                             opt("--t-range")->count() ? opt("--t-range")->as<std::string>() : "",
                             cfg, "t_range", "0.5:0.005:8");
  if (!(h > 0) || !(lam > 0) || !(surf.a > 0) || !(surf.b > 0))
    throw InputError("h, lambda_max and the sides must be positive");

  const auto spec = pillowcase_spectrum(surf, lam);
  const auto tr = mollified_trace(spec, ts, Mollifier(h));
  out << "t,re,im\n";
  for (std::size_t i = 0; i < ts.size(); ++i)
    out << csv_row({num(ts[i]), num(tr[i].real()), num(tr[i].imag())}) << '\n';

  // peak report
  const double tmax = ts.empty() ? 0.0 : *std::max_element(ts.begin(), ts.end());
  const auto lengths = pillowcase_lengths(surf, tmax + 1.0);
  auto nearest = [&](double t) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (double l : lengths)
      if (std::isnan(best) || std::abs(l - t) < std::abs(best - t)) best = l;
    return best;
  };
  std::vector<double> mag(tr.size()), quiet;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    mag[i] = std::abs(tr[i]);
    if (!(std::abs(nearest(ts[i]) - ts[i]) <= 20 * h)) quiet.push_back(mag[i]);
  }
  double floor = 0.0;
  if (!quiet.empty()) {
    std::nth_element(quiet.begin(), quiet.begin() + quiet.size() / 2, quiet.end());
    floor = quiet[quiet.size() / 2];
  }
  json peaks = json::array();
  for (const auto& p : detect_peaks(ts, mag, 3 * floor)) {
    const double L = nearest(p.t);
    json e{{"t_peak", p.t}, {"nearest_length", L}, {"height", p.height}};
    try {
      const auto fit = extract_singularity_coefficient(ts, tr, L, h, -1.0, lengths);
      e["fitted_coefficient_re"] = fit.coefficient.real();
      e["fitted_coefficient_im"] = fit.coefficient.imag();
      e["residual_ratio"] = fit.residual_ratio;
      e["valid"] = fit.valid;
    } catch (const Error& ex) {
      e["valid"] = false;
      e["status"] = errc_name(ex.code());
    }
    peaks.push_back(e);
  }
  json report{{"h", h}, {"lambda_max", lam}, {"noise_floor", floor}, {"peaks", peaks}};
  std::string rpath = opt("--report")->count() ? opt("--report")->as<std::string>() : "";
  if (rpath.empty() && !g.out.empty()) rpath = g.out + ".peaks.json";
  if (rpath.empty()) {
    err << dump(report);
  } else {
    Sink rs(rpath, err);
    *rs << dump(report);
  }
  return ok;
}

// ---------------------------------------------------------------- predict

int cmd_predict(const Globals& g, CLI::App& sub, std::ostream& out) {
  const json cfg = load_config(g.config);
  auto opt = [&](const char* n) { return sub.get_option(n); };
  const double L = pick(opt("--L"), opt("--L")->as<double>(), cfg, "L", 3.0);
  const double b = pick(opt("--b"), opt("--b")->as<double>(), cfg, "b", 1.0);
  const auto p = predict_two_diffraction_singularity(L, b);
  json j{{"L", p.L},
         {"b", p.b},
         {"order", p.order},
         {"coefficient", complex_json(p.coefficient)},
         {"abs_coefficient", std::abs(p.coefficient)}};
  out << dump(j);
  return ok;
}

// ----------------------------------------------------------------- verify

int cmd_verify(const Globals& g, CLI::App& sub, std::ostream& out) {
  AcceptanceOptions o;
  o.seed = g.seed;
  o.tol = parse_tol(g.tol);
  if (sub.get_option("--only")->count()) o.only = sub.get_option("--only")->as<std::vector<std::string>>();
  const auto known = default_tolerances();
  for (const auto& [k, v] : o.tol)
    if (!known.count(k)) throw InputError("unknown tolerance key '" + k + "'");
  const auto rows = run_acceptance(o);
  if (rows.empty()) throw InputError("--only selected no acceptance test");
  for (const auto& r : rows) out << format_row(r) << '\n';
  out.flush();
  return all_passed(rows) ? ok : verification_failure;
}

} // namespace

std::vector<double> parse_range(const std::string& s) {
  std::vector<double> v;
  auto to_d = [&](const std::string& x) {
    try {
      std::size_t used = 0;
      double d = std::stod(x, &used);
      if (used != x.size()) throw std::invalid_argument(x);
      return d;
    } catch (const std::logic_error&) {
      throw InputError("bad number '" + x + "' in range '" + s + "'");
    }
  };
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InputError("range must be start:step:stop, got '" + s + "'");
    const double a = to_d(parts[0]), st = to_d(parts[1]), b = to_d(parts[2]);
    if (!(st > 0) || b < a) throw InputError("range needs step > 0 and stop >= start: '" + s + "'");
    const long n = long(std::floor((b - a) / st + 1e-9));
    if (n > 10000000) throw InputError("range too long: '" + s + "'");
    for (long i = 0; i <= n; ++i) v.push_back(a + double(i) * st);
    return v;
  }
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) v.push_back(to_d(p));
  if (v.empty()) throw InputError("empty value list");
  return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wave propagation on flat cones: kernels, scattering, two-diffraction composition, traces"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1, 1);
  Globals g;
  app.add_option("--config", g.config, "JSON input file");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--seed", g.seed, "seed for randomized suites");
  g.h_opt = app.add_option("--h", g.h, "mollifier width");
  g.lambda_opt = app.add_option("--lambda-max", g.lambda_max, "spectral cut-off");
  app.add_option("--tol", g.tol, "tolerance override KEY=VAL (repeatable)");

  auto* kernel = app.add_subcommand("kernel", "sine / half-wave kernel sweep (CSV)");
  kernel->add_option("--alpha", "cone angle");
  kernel->add_option("--representation", "closed | cheeger | friedlander | moving | plane | halfwave");
  kernel->add_option("--r1");
  kernel->add_option("--theta1");
  kernel->add_option("--r2");
  kernel->add_option("--theta2");
  kernel->add_option("--ts", "times, start:step:stop or comma list");

  auto* scatter = app.add_subcommand("scatter", "scattering matrix table (CSV)");
  scatter->add_option("--alpha", "cone angle");
  scatter->add_option("--thetas", "angles, start:step:stop or comma list");
  scatter->add_option("--N", "Fourier terms");
  scatter->add_flag("--raw", "plain partial sums instead of Cesaro means");

  auto* compose = app.add_subcommand("compose", "two-diffraction composition check (JSON)");
  compose->add_option("--omega", "frequency");
  compose->add_option("--max-rel-err", "oracle tolerance (exit 1 above it)");

  auto* trace = app.add_subcommand("trace", "mollified pillowcase trace (CSV) and peak report (JSON)");
  trace->add_option("--t-range", "times, start:step:stop");
  trace->add_option("--report", "peak report path (default OUT.peaks.json, or stderr)");

  auto* predict = app.add_subcommand("predict", "predicted two-diffraction trace singularity (JSON)");
  predict->add_option("--L", "orbit length");
  predict->add_option("--b", "leg between the two cone points");

  auto* verify = app.add_subcommand("verify", "acceptance suite AT-1..AT-7");
  std::vector<std::string> only;
  verify->add_option("--only", only, "run only these tests (e.g. AT-3)");

  for (auto* s : {kernel, scatter, compose, trace, predict, verify}) s->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == verify) {
      Sink s(g.out, out);
      return cmd_verify(g, *sub, *s);
    }
    // input errors surface before anything is written
    std::ostringstream buf;
    int rc = ok;
    if (sub == kernel) rc = cmd_kernel(g, *sub, buf);
    else if (sub == scatter) rc = cmd_scatter(g, *sub, buf);
    else if (sub == compose) rc = cmd_compose(g, *sub, buf);
    else if (sub == trace) rc = cmd_trace(g, *sub, buf, err);
    else if (sub == predict) rc = cmd_predict(g, *sub, buf);
    Sink s(g.out, out);
    *s << buf.str();
    return rc;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const CLI::ConversionError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    const bool numeric = e.code() == Errc::QuadratureFailure || e.code() == Errc::ModeTailTooLarge;
    return numeric ? verification_failure : input_error;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return input_error;
  }
}

} // namespace conewave::cli
