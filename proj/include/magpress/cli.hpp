#pragma once

// Batch front end: config ingestion, parameter sweeps and CSV/JSON emission.
// Exit codes: 0 success, 1 physics-check failure or unwritable output,
// 2 usage error (bad flags, missing or malformed config).

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "magpress/config.hpp"
#include "magpress/duality.hpp"
#include "magpress/medium.hpp"
#include "magpress/momenta.hpp"
#include "magpress/polariton.hpp"
#include "magpress/pressure.hpp"
#include "magpress/response.hpp"

namespace magpress::cli {

using json = nlohmann::ordered_json;

class UsageError : public Error {
public:
  using Error::Error;
};

class OutputError : public Error {
public:
  using Error::Error;
};

// Physics check failed; the report has already been written.
class CheckFailure : public Error {
public:
  using Error::Error;
};

// ---- worker pool -----------------------------------------------------------

inline unsigned worker_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("MAGPRESS_THREADS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw UsageError(std::string("MAGPRESS_THREADS must be a positive integer, got '") +
                       env + "'");
    n = static_cast<unsigned>(v);
  }
  return n;
}

// Evaluates fn(i) for i in [0, n) on up to worker_cap() threads; results are
// stored by index. The first exception (lowest index) is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F &&fn) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = std::min<std::size_t>(worker_cap(), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return out;
}

// ---- emission --------------------------------------------------------------

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_csv(const std::vector<std::string> &header,
                          const std::vector<std::vector<double>> &rows) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i)
    s += (i ? "," : "") + header[i];
  s += '\n';
  for (const auto &row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      s += (i ? "," : "") + format_double(row[i]);
    s += '\n';
  }
  return s;
}

inline std::string to_json(const json &j) { return j.dump(2) + "\n"; }

// Writes to `path`, or to `fallback` when path is empty.
inline void emit(const std::string &text, const std::string &path,
                 std::ostream &fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw OutputError("cannot write output file '" + path + "'");
  f << text;
  f.close();
  if (!f)
    throw OutputError("failed while writing output file '" + path + "'");
}

// ---- helpers ---------------------------------------------------------------

namespace detail {

struct Context {
  std::ostream &out;
  std::ostream &err;
  config::RunConfig cfg;
};

inline config::RunConfig load_config(const std::string &path, bool needs_medium) {
  if (path.empty())
    throw UsageError("--config is required");
  auto cfg = config::load(path);
  if (needs_medium && !cfg.has_medium)
    throw config::ConfigError(path + ": missing [medium] table");
  return cfg;
}

inline std::string output_path(const Context &c, const std::string &flag,
                               const std::string &table,
                               const std::string &key = "output") {
  if (!flag.empty())
    return flag;
  if (const auto *v = c.cfg.doc.find(table, key)) {
    if (!v->is_string())
      throw config::ConfigError(c.cfg.doc.where(table, key, v->line) +
                                " must be a string");
    return std::get<std::string>(v->data);
  }
  return {};
}

// Grid from the command line if given, else from the config table.
inline std::vector<double> require_grid(const Context &c,
                                        const std::vector<double> &flag,
                                        const std::string &table,
                                        const std::string &key) {
  std::vector<double> g = flag;
  if (g.empty()) {
    auto from_cfg = c.cfg.grid(table, key);
    if (!from_cfg)
      throw UsageError("no " + key + " grid: set [" + table + "] " + key +
                       " or " + key + "_range, or pass --" + key);
    g = *from_cfg;
  } else {
    for (std::size_t i = 1; i < g.size(); ++i)
      if (!(g[i] > g[i - 1]))
        throw UsageError("--" + key + " values must be strictly increasing");
  }
  return g;
}

inline double positive_tolerance(double tol, const char *name) {
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw UsageError(std::string(name) + " must be positive");
  return tol;
}

inline double setting(const Context &c, std::optional<double> flag,
                      const std::string &table, const std::string &key,
                      std::optional<double> fallback = std::nullopt) {
  if (flag)
    return *flag;
  if (auto v = c.cfg.number(table, key))
    return *v;
  if (fallback)
    return *fallback;
  throw UsageError("missing parameter: set [" + table + "] " + key +
                   " or pass --" + key);
}

inline void note_skip(std::ostream &err, const char *what, double x,
                      const std::string &why) {
  err << "note: skipped " << what << " = " << format_double(x) << ": " << why
      << "\n";
}

inline json resonance_json(const std::vector<ResonancePair> &list,
                           const config::Units &u) {
  json arr = json::array();
  for (const auto &r : list)
    arr.push_back({u.freq_out(r.omega_T), u.freq_out(r.omega_L), u.freq_out(r.gamma)});
  return arr;
}

} // namespace detail

// ---- commands --------------------------------------------------------------

inline int cmd_medium(detail::Context &c, const std::string &output,
                      const std::string &csv_path) {
  const auto &m = c.cfg.medium;
  const auto &u = c.cfg.units;
  const auto lim = static_limit_report(m);
  json j;
  j["electric"] = detail::resonance_json(m.electric(), u);
  j["magnetic"] = detail::resonance_json(m.magnetic(), u);
  j["frozen"] = m.is_frozen();
  j["eps_static"] = lim.eps0;
  j["mu_static"] = lim.mu0;
  j["eps_inf"] = lim.eps_inf;
  j["mu_inf"] = lim.mu_inf;
  j["static_check_eps"] = lim.eps0_check;
  j["static_check_mu"] = lim.mu0_check;
  json bands = json::array();
  for (const auto &b : branch_windows(m))
    bands.push_back({u.freq_out(b.omega_lo),
                     std::isinf(b.omega_hi) ? json("inf") : json(u.freq_out(b.omega_hi))});
  j["pass_bands"] = bands;
  emit(to_json(j), detail::output_path(c, output, "medium"), c.out);

  if (!csv_path.empty()) {
    const auto grid = detail::require_grid(c, {}, "medium", "omega");
    auto rows = parallel_map<std::vector<double>>(grid.size(), [&](std::size_t i) {
      const double w = u.freq_in(grid[i]);
      const auto r = optical_response(m, w);
      return std::vector<double>{grid[i],           r.eps.real(),   r.eps.imag(),
                                 r.mu.real(),       r.mu.imag(),    r.eta_p.real(),
                                 r.eta_p.imag(),    r.eta_g.real(), u.length_out(r.att_len)};
    });
    emit(to_csv({"omega", "eps_re", "eps_im", "mu_re", "mu_im", "eta_p_re",
                 "eta_p_im", "eta_g", "att_len"},
                rows),
         csv_path, c.out);
  }
  return 0;
}

inline int cmd_dispersion(detail::Context &c, const std::vector<double> &k_flag,
                          const std::string &output) {
  const auto &u = c.cfg.units;
  const auto grid = detail::require_grid(c, k_flag, "dispersion", "k");
  const auto sols = parallel_map<BranchSolution>(grid.size(), [&](std::size_t i) {
    return branch_frequencies(c.cfg.medium, u.wavenumber_in(grid[i]));
  });
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (const auto &b : sols[i].branches)
      rows.push_back({grid[i], static_cast<double>(b.u), u.freq_out(b.omega),
                      b.eta_p, b.eta_g});
  emit(to_csv({"k", "u", "omega", "eta_p", "eta_g"}, rows),
       detail::output_path(c, output, "dispersion"), c.out);
  return 0;
}

inline json sumrule_json(const std::vector<SumRuleReport> &reports, double tol,
                         const config::Units &u) {
  double worst = 0.0;
  json pts = json::array();
  for (const auto &r : reports) {
    worst = std::max(worst, r.max_residual());
    pts.push_back({{"k", u.wavenumber_out(r.k)},
                   {"s1", r.s1},
                   {"s2", r.s2},
                   {"s3", r.s3},
                   {"s4", r.s4}});
  }
  json j;
  j["tolerance"] = tol;
  j["max_residual"] = worst;
  j["pass"] = worst <= tol;
  j["points"] = pts;
  return j;
}

inline int cmd_sumrules(detail::Context &c, const std::vector<double> &k_flag,
                        std::optional<double> tol_flag, const std::string &output) {
  const auto &u = c.cfg.units;
  const auto grid = detail::require_grid(c, k_flag, "sumrules", "k");
  const double tol = detail::positive_tolerance(
      detail::setting(c, tol_flag, "sumrules", "tol", 1e-9), "tol");
  const auto reports = parallel_map<SumRuleReport>(grid.size(), [&](std::size_t i) {
    return sum_rule_report(c.cfg.medium, u.wavenumber_in(grid[i]));
  });
  const auto j = sumrule_json(reports, tol, u);
  emit(to_json(j), detail::output_path(c, output, "sumrules"), c.out);
  if (!j["pass"].get<bool>()) {
    c.err << "sum rules violated: max residual " << format_double(j["max_residual"])
          << " exceeds " << format_double(tol) << "\n";
    return 1;
  }
  return 0;
}

inline int cmd_spectra(detail::Context &c, const std::vector<double> &w_flag,
                       std::optional<double> area_flag, const std::string &output) {
  const auto &u = c.cfg.units;
  const auto grid = detail::require_grid(c, w_flag, "spectra", "omega");
  const double area_nat = u.area_in(detail::setting(c, area_flag, "spectra", "area", 1.0));
  if (!(area_nat > 0.0))
    throw UsageError("area must be positive");
  const double tol = detail::positive_tolerance(
      c.cfg.number("spectra", "tol").value_or(1e-10), "[spectra] tol");
  // <E^2>, <H^2> per unit angular frequency to SI.
  const double e_si = u.si() ? config::kHbar * config::kZ0 *
                                   std::pow(u.omega_ref, 3) /
                                   std::pow(config::kSpeedOfLight, 2)
                             : 1.0;
  const double h_si = u.si() ? e_si / (config::kZ0 * config::kZ0) : 1.0;

  struct Row {
    std::optional<std::vector<double>> values;
    std::string skip;
    double mismatch = 0.0;
  };
  const auto rows = parallel_map<Row>(grid.size(), [&](std::size_t i) {
    Row r;
    const double w = u.freq_in(grid[i]);
    try {
      const auto ny = spectral_density_1d(c.cfg.medium, w, area_nat);
      const auto qu = vacuum_spectra_quantum(c.cfg.medium, w, area_nat);
      r.mismatch = std::max(std::abs(ny.E_sq - qu.E_sq) / std::abs(ny.E_sq),
                            std::abs(ny.H_sq - qu.H_sq) / std::abs(ny.H_sq));
      r.values = std::vector<double>{grid[i], ny.E_sq * e_si, ny.H_sq * h_si,
                                     ny.E_sq * e_si / (ny.H_sq * h_si)};
    } catch (const BandError &e) {
      r.skip = e.what();
    } catch (const PoleError &e) {
      r.skip = e.what();
    }
    return r;
  });
  std::vector<std::vector<double>> out;
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].values) {
      detail::note_skip(c.err, "omega", grid[i], rows[i].skip);
      continue;
    }
    worst = std::max(worst, rows[i].mismatch);
    out.push_back(*rows[i].values);
  }
  emit(to_csv({"omega", "E_sq", "H_sq", "ratio"}, out),
       detail::output_path(c, output, "spectra"), c.out);
  if (worst > tol) {
    c.err << "spectra cross-check failed: operator and response routes differ by "
          << format_double(worst) << " (tolerance " << format_double(tol) << ")\n";
    return 1;
  }
  return 0;
}

inline int cmd_momenta(detail::Context &c, const std::vector<double> &w_flag,
                       const std::string &output) {
  const auto &u = c.cfg.units;
  const auto grid = detail::require_grid(c, w_flag, "momenta", "omega");
  struct Row {
    std::optional<std::vector<double>> values;
    std::string skip;
  };
  const auto rows = parallel_map<Row>(grid.size(), [&](std::size_t i) {
    Row r;
    const double w = u.freq_in(grid[i]);
    try {
      const auto p = photon_momenta(c.cfg.medium, w);
      r.values = std::vector<double>{grid[i], p.p_M, p.p_GM, p.p_A,
                                     angular_momentum_ratio(c.cfg.medium, w)};
    } catch (const BandError &e) {
      r.skip = e.what();
    } catch (const PoleError &e) {
      r.skip = e.what();
    }
    return r;
  });
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].values) {
      detail::note_skip(c.err, "omega", grid[i], rows[i].skip);
      continue;
    }
    out.push_back(*rows[i].values);
  }
  emit(to_csv({"omega", "p_M", "p_GM", "p_A", "J_ratio"}, out),
       detail::output_path(c, output, "momenta"), c.out);
  return 0;
}

struct DualityFuzz {
  std::uint64_t seed = 1;
  int states = 100;
  int angles = 32;
  double tol = 1e-12;
  double control_threshold = 1e-3;
};

inline json duality_report(const DualityFuzz &p) {
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double el = 0.0, lorentz_min = kInf, energy = 0.0, poy = 0.0, mink = 0.0, abr = 0.0;
  for (int n = 0; n < p.states; ++n) {
    const auto s = random_field_state(rng, true);
    const auto g = random_gradients(rng);
    std::vector<double> xi(static_cast<std::size_t>(p.angles));
    for (auto &x : xi)
      x = angle(rng);
    const auto rep = invariance_check(s, g, xi);
    el = std::max(el, rep.max_dev_EL / rep.scale);
    lorentz_min = std::min(lorentz_min, rep.max_dev_L / rep.scale);
    const double e0 = energy_density(s);
    const Vec3 s0 = poynting(s), m0 = minkowski_density(s), a0 = abraham_density(s);
    const double e_scale = 0.5 * (s.E.norm() * s.D.norm() + s.B.norm() * s.H.norm());
    const double s_scale = s.E.norm() * s.H.norm();
    const double m_scale = s.D.norm() * s.B.norm();
    for (double x : xi) {
      const auto r = hl_rotate(s, {x});
      energy = std::max(energy, std::abs(energy_density(r) - e0) / e_scale);
      poy = std::max(poy, (poynting(r) - s0).norm() / s_scale);
      mink = std::max(mink, (minkowski_density(r) - m0).norm() / m_scale);
      abr = std::max(abr, (abraham_density(r) - a0).norm() / s_scale);
    }
  }
  const bool pass = el <= p.tol && energy <= p.tol && poy <= p.tol && mink <= p.tol &&
                    abr <= p.tol && lorentz_min > p.control_threshold;
  json j;
  j["seed"] = p.seed;
  j["states"] = p.states;
  j["angles"] = p.angles;
  j["tolerance"] = p.tol;
  j["max_rel_dev_einstein_laub"] = el;
  j["min_rel_dev_lorentz"] = lorentz_min;
  j["max_rel_dev_energy"] = energy;
  j["max_rel_dev_poynting"] = poy;
  j["max_rel_dev_minkowski"] = mink;
  j["max_rel_dev_abraham"] = abr;
  j["pass"] = pass;
  return j;
}

inline int cmd_duality(detail::Context &c, DualityFuzz p, const std::string &output) {
  if (p.states < 1 || p.angles < 1)
    throw UsageError("--states and --angles must be at least 1");
  detail::positive_tolerance(p.tol, "--tol");
  const auto j = duality_report(p);
  emit(to_json(j), detail::output_path(c, output, "duality"), c.out);
  if (!j["pass"].get<bool>()) {
    c.err << "duality invariance check failed\n";
    return 1;
  }
  return 0;
}

inline json budget_json(const MomentumBudget &b) {
  json j;
  j["p_total"] = b.p_total;
  j["bulk"] = b.bulk;
  j["surface"] = b.surface;
  j["numeric_total"] = b.numeric_total;
  j["numeric_bulk"] = b.numeric_bulk;
  j["numeric_surface"] = b.numeric_surface;
  j["closure_residual"] = b.closure_residual;
  return j;
}

struct PressureFlags {
  std::optional<double> omega0, L, area, closure_tol;
  std::string output, profile, history;
};

inline int cmd_pressure(detail::Context &c, const PressureFlags &f) {
  const auto &u = c.cfg.units;
  PulseSpec pulse;
  pulse.omega0 = u.freq_in(detail::setting(c, f.omega0, "pressure", "omega0"));
  pulse.L = u.length_in(detail::setting(c, f.L, "pressure", "L"));
  pulse.area = u.area_in(detail::setting(c, f.area, "pressure", "area", 1.0));
  const double closure_tol = detail::positive_tolerance(
      detail::setting(c, f.closure_tol, "pressure", "closure_tol", 1e-4),
      "closure_tol");
  const HalfSpaceScenario scn(c.cfg.medium, pulse);
  const double L = pulse.L;

  // Natural force units (hbar omega0/c per unit time) to newtons.
  const double force_si =
      u.si() ? config::kHbar * pulse.omega0 * u.omega_ref / config::kSpeedOfLight *
                   u.omega_ref
             : 1.0;
  const double density_si = u.si() ? force_si / std::pow(u.length_out(1.0), 3) : 1.0;

  const auto profile = detail::output_path(c, f.profile, "pressure", "profile");
  if (!profile.empty()) {
    std::vector<double> ts, zs;
    if (auto g = c.cfg.grid("pressure", "profile_t"))
      for (double t : *g)
        ts.push_back(u.time_in(t));
    else
      ts = {-L, 0.0, L};
    if (auto g = c.cfg.grid("pressure", "profile_z"))
      for (double z : *g)
        zs.push_back(u.length_in(z));
    else
      for (int i = 0; i <= 200; ++i)
        zs.push_back(3.0 * L / scn.optics().eta_g * i / 200.0);
    const auto rows = parallel_map<std::vector<double>>(
        ts.size() * zs.size(), [&](std::size_t n) {
          const double t = ts[n / zs.size()], z = zs[n % zs.size()];
          return std::vector<double>{u.length_out(z), u.time_out(t),
                                     force_density(scn, z, t) * density_si};
        });
    emit(to_csv({"z", "t", "f_z"}, rows), profile, c.out);
  }

  const auto history = detail::output_path(c, f.history, "pressure", "history");
  if (!history.empty()) {
    std::vector<double> ts;
    if (auto g = c.cfg.grid("pressure", "history_t"))
      for (double t : *g)
        ts.push_back(u.time_in(t));
    else
      for (int i = 0; i <= 200; ++i)
        ts.push_back(-5.0 * L + 10.0 * L * i / 200.0);
    if (scn.length_ratio() >= 0.01)
      c.err << "note: L/ell = " << format_double(scn.length_ratio())
            << "; the analytic force history assumes L/ell < 0.01\n";
    const auto rows = parallel_map<std::vector<double>>(ts.size(), [&](std::size_t i) {
      const auto F = total_force(scn, ts[i]);
      return std::vector<double>{u.time_out(ts[i]), F.analytic * force_si,
                                 F.numeric * force_si};
    });
    emit(to_csv({"t", "F_analytic", "F_numeric"}, rows), history, c.out);
  }

  const auto b = momentum_budget(scn, closure_tol);
  emit(to_json(budget_json(b)), detail::output_path(c, f.output, "pressure"), c.out);
  if (!b.closed) {
    c.err << "momentum budget does not close: residual "
          << format_double(b.closure_residual) << " exceeds "
          << format_double(closure_tol) << " (L/ell = "
          << format_double(scn.length_ratio()) << ")\n";
    return 1;
  }
  return 0;
}

// Bundled fixture: two electric and one magnetic resonance, with a golden-ratio
// pair as the first electric resonance.
inline MediumModel selfcheck_medium(double gamma = 0.0) {
  return MediumModel({{1.0, std::sqrt(2.0), gamma}, {3.0, 3.5, gamma}},
                     {{1.8, 2.2, gamma}});
}

inline int cmd_selfcheck(detail::Context &c) {
  int failures = 0;
  auto report = [&](const std::string &name, double value, double tol, bool below) {
    const bool ok = below ? value <= tol : value > tol;
    failures += ok ? 0 : 1;
    c.out << (ok ? "PASS " : "FAIL ") << name << " value=" << format_double(value)
          << (below ? " tol=" : " threshold=") << format_double(tol) << "\n";
  };
  const auto m = selfcheck_medium();

  double sr = 0.0;
  for (double k : {0.01, 0.3, 1.0, 2.5, 10.0, 50.0})
    sr = std::max(sr, sum_rule_report(m, k).max_residual());
  report("sum_rules", sr, 1e-9, true);

  double spec = 0.0, ratio = 0.0;
  for (const auto &bp : branch_frequencies(m, 1.7).branches) {
    const auto ny = spectral_density_1d(m, bp.omega, 2.0);
    const auto qu = vacuum_spectra_quantum(m, bp.omega, 2.0);
    spec = std::max({spec, std::abs(ny.E_sq / qu.E_sq - 1.0),
                     std::abs(ny.H_sq / qu.H_sq - 1.0)});
    ratio = std::max(ratio, std::abs(ny.ratio() / (bp.mu / bp.eps) - 1.0));
  }
  report("spectra_routes", spec, 1e-10, true);
  report("spectra_ratio", ratio, 1e-12, true);

  DualityFuzz fuzz;
  fuzz.states = 50;
  const auto d = duality_report(fuzz);
  report("duality_einstein_laub", d["max_rel_dev_einstein_laub"], 1e-12, true);
  report("duality_lorentz_control", d["min_rel_dev_lorentz"], 1e-3, false);

  PulseSpec pulse{0.5, 100.0, 1.0};
  const HalfSpaceScenario scn(selfcheck_medium(1e-5), pulse);
  const auto b = momentum_budget(scn);
  report("budget_closure", b.closure_residual, 1e-4, true);
  report("budget_bulk", std::abs(b.numeric_bulk - b.bulk) / b.bulk, 1e-4, true);
  report("incident_momentum", incident_momentum_check(scn), 1e-12, true);

  c.out << (failures ? "selfcheck FAILED (" + std::to_string(failures) + ")"
                     : std::string("selfcheck passed"))
        << "\n";
  return failures ? 1 : 0;
}

// ---- entry point -----------------------------------------------------------

inline int run_command(int argc, const char *const *argv, std::ostream &out,
                       std::ostream &err) {
  CLI::App app{"magpress: photon momentum and radiation pressure in "
               "magneto-dielectric media"};
  app.require_subcommand(1);
  app.name("magpress");

  std::string config_path, output;

  auto add_common = [&](CLI::App *sub, bool config_required) {
    auto *opt = sub->add_option("--config", config_path, "Run configuration (TOML)");
    if (config_required)
      opt->check(CLI::ExistingFile);
    sub->add_option("-o,--output", output, "Output file (default: stdout)");
  };

  auto *medium = app.add_subcommand("medium", "Static limits, pass bands, optics sweep");
  add_common(medium, true);
  std::string medium_csv;
  medium->add_option("--csv", medium_csv,
                     "Write an optics sweep over [medium] omega / omega_range");

  std::vector<double> k_values, w_values;
  std::optional<double> tol, area;

  auto *dispersion = app.add_subcommand("dispersion", "Polariton branches on a k grid");
  add_common(dispersion, true);
  dispersion->add_option("--k", k_values, "Wave numbers (overrides config)");

  auto *sumrules = app.add_subcommand("sumrules", "Branch sum-rule residuals");
  add_common(sumrules, true);
  sumrules->add_option("--k", k_values, "Wave numbers (overrides config)");
  sumrules->add_option("--tol", tol, "Residual tolerance (default 1e-9)");

  auto *spectra = app.add_subcommand("spectra", "Vacuum field-fluctuation spectra");
  add_common(spectra, true);
  spectra->add_option("--omega", w_values, "Frequencies (overrides config)");
  spectra->add_option("--area", area, "Beam cross-section");

  auto *momenta = app.add_subcommand("momenta", "Single-photon momenta");
  add_common(momenta, true);
  momenta->add_option("--omega", w_values, "Frequencies (overrides config)");

  auto *duality = app.add_subcommand("duality", "Duality-invariance fuzz");
  add_common(duality, true);
  DualityFuzz fuzz;
  std::optional<std::uint64_t> seed;
  std::optional<int> states, angles;
  std::optional<double> dual_tol;
  duality->add_option("--seed", seed, "Random seed (default 1)");
  duality->add_option("--states", states, "Number of random states (default 100)");
  duality->add_option("--angles", angles, "Angles per state (default 32)");
  duality->add_option("--tol", dual_tol, "Relative tolerance (default 1e-12)");

  auto *pressure = app.add_subcommand("pressure", "Radiation pressure of a pulse");
  add_common(pressure, true);
  PressureFlags pf;
  pressure->add_option("--omega0", pf.omega0, "Carrier frequency");
  pressure->add_option("--L", pf.L, "Pulse length");
  pressure->add_option("--area", pf.area, "Beam cross-section");
  pressure->add_option("--closure-tol", pf.closure_tol, "Budget closure tolerance");
  pressure->add_option("--profile", pf.profile, "Force-density profile CSV");
  pressure->add_option("--history", pf.history, "Total-force history CSV");

  auto *selfcheck = app.add_subcommand("selfcheck", "Cross-module identities on a bundled fixture");

  CLI::App *active = &app;
  try {
    app.parse(argc, argv);
    for (auto *sub : app.get_subcommands())
      active = sub;
  } catch (const CLI::CallForHelp &) {
    for (auto *sub : app.get_subcommands())
      active = sub;
    out << active->help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    for (auto *sub : app.get_subcommands())
      active = sub;
    err << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  }

  try {
    const bool needs_medium = active != duality && active != selfcheck;
    detail::Context c{out, err, {}};
    if (active != selfcheck && (needs_medium || !config_path.empty()))
      c.cfg = detail::load_config(config_path, needs_medium);

    if (active == medium)
      return cmd_medium(c, output, medium_csv);
    if (active == dispersion)
      return cmd_dispersion(c, k_values, output);
    if (active == sumrules)
      return cmd_sumrules(c, k_values, tol, output);
    if (active == spectra)
      return cmd_spectra(c, w_values, area, output);
    if (active == momenta)
      return cmd_momenta(c, w_values, output);
    if (active == duality) {
      auto from_cfg = [&](const char *key, double fallback) {
        return c.cfg.number("duality", key).value_or(fallback);
      };
      fuzz.seed = seed ? *seed : static_cast<std::uint64_t>(from_cfg("seed", 1));
      fuzz.states = states ? *states : static_cast<int>(from_cfg("states", 100));
      fuzz.angles = angles ? *angles : static_cast<int>(from_cfg("angles", 32));
      fuzz.tol = dual_tol ? *dual_tol : from_cfg("tol", 1e-12);
      return cmd_duality(c, fuzz, output);
    }
    if (active == pressure) {
      pf.output = output;
      return cmd_pressure(c, pf);
    }
    return cmd_selfcheck(c);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  } catch (const config::ConfigError &e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  } catch (const OutputError &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int run_command(const std::vector<std::string> &args, std::ostream &out,
                       std::ostream &err) {
  std::vector<const char *> argv{"magpress"};
  for (const auto &a : args)
    argv.push_back(a.c_str());
  return run_command(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace magpress::cli
