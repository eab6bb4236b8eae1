#pragma once

// Transverse polariton branches: solutions of c^2 k^2 = eps(omega) mu(omega)
// omega^2 at fixed k, their phase/group indices, and the branch sum rules.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "magpress/medium.hpp"
#include "magpress/numerics.hpp"

namespace magpress {

struct BranchPoint {
  int u = 0;
  double omega = 0.0;
  double k = 0.0;
  // Signed: negative on a double-negative branch, where |eta_p| = k/omega.
  double eta_p = 0.0;
  double eta_g = 0.0;
  double eps = 0.0;
  double mu = 0.0;
};

struct BranchSolution {
  double k = 0.0;
  std::vector<BranchPoint> branches;
};

struct BandWindow {
  double omega_lo;
  double omega_hi;
};

// Propagating bands (eps*mu > 0) of the lossless model. Band edges are the
// sorted poles and zeros of eps*mu; bands and stop bands alternate.
inline std::vector<BandWindow> branch_windows(const MediumModel &model) {
  const auto clean = model.lossless();
  std::vector<double> edges{0.0};
  for (double p : clean.breakpoints())
    edges.push_back(p);
  edges.push_back(kInf);
  std::vector<BandWindow> bands;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i];
    const double hi = edges[i + 1];
    double probe;
    if (std::isinf(hi))
      probe = lo > 0.0 ? 2.0 * lo : 1.0;
    else if (lo == 0.0)
      probe = 0.5 * hi;
    else
      probe = std::sqrt(lo * hi);
    const double prod =
        (permittivity(clean, probe) * permeability(clean, probe)).real();
    if (prod > 0.0)
      bands.push_back({lo, hi});
  }
  return bands;
}

// Coefficients (descending powers of x = omega^2) of
//   k^2 prod_T(T^2 - x) - b x prod_L(L^2 - x),
// whose roots are the branch frequencies squared. b is the background eps*mu.
inline std::vector<double> dispersion_polynomial(const MediumModel &model,
                                                 double k) {
  const auto clean = model.lossless();
  std::vector<double> poles;
  std::vector<double> zeros;
  for (const auto *list : {&clean.electric(), &clean.magnetic()})
    for (const auto &r : *list) {
      poles.push_back(r.omega_T * r.omega_T);
      zeros.push_back(r.omega_L * r.omega_L);
    }
  // Multiply out prod (a_i - x), ascending powers while building.
  auto expand = [](const std::vector<double> &roots) {
    std::vector<double> c{1.0};
    for (double a : roots) {
      std::vector<double> next(c.size() + 1, 0.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        next[j] = std::fma(a, c[j], next[j]);
        next[j + 1] -= c[j];
      }
      c = std::move(next);
    }
    return c;
  };
  const double b = (clean.eps_background() * clean.mu_background()).real();
  const auto pt = expand(poles);
  const auto pl = expand(zeros);
  const std::size_t n = pt.size(); // = resonance_count + 1
  std::vector<double> ascending(n + 1, 0.0);
  for (std::size_t j = 0; j < pt.size(); ++j)
    ascending[j] += k * k * pt[j];
  for (std::size_t j = 0; j < pl.size(); ++j)
    ascending[j + 1] -= b * pl[j];
  return {ascending.rbegin(), ascending.rend()};
}

namespace detail {

// ln(x eps mu b / k^2) as a function of x = omega^2 inside one band, computed
// from the factored form. Monotone across the band.
struct LogDispersion {
  std::vector<double> poles;
  std::vector<double> zeros;
  double log_b;
  double log_k2;

  double operator()(double x) const {
    double v = std::log(x) + log_b - log_k2;
    for (double z : zeros)
      v += std::log(std::abs(z - x));
    for (double p : poles)
      v -= std::log(std::abs(p - x));
    return v;
  }
  double derivative(double x) const {
    double d = 1.0 / x;
    for (double z : zeros)
      d -= 1.0 / (z - x);
    for (double p : poles)
      d += 1.0 / (p - x);
    return d;
  }
};

// Safeguarded Newton on phi within (lo, hi): Newton steps that leave the
// bracket fall back to bisection in log x.
inline double solve_in_band(const LogDispersion &phi, double lo, double hi,
                            double guess) {
  const bool increasing = phi.derivative(guess) > 0.0;
  double x = guess;
  for (int it = 0; it < 200; ++it) {
    const double v = phi(x);
    if (v == 0.0)
      return x;
    if ((v < 0.0) == increasing)
      lo = x;
    else
      hi = x;
    const double d = phi.derivative(x);
    double next = x - v / d;
    if (!(next > lo && next < hi)) {
      next = (lo > 0.0 && std::isfinite(hi)) ? std::sqrt(lo * hi)
             : std::isfinite(hi)             ? 0.5 * (lo + hi)
                                             : 2.0 * x;
    }
    if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * x)
      return next;
    x = next;
  }
  return x;
}

} // namespace detail

// All n_e + n_m + 1 transverse branches at wave number k, ascending in omega.
inline BranchSolution branch_frequencies(const MediumModel &model, double k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw DomainError("branch_frequencies requires finite k > 0");
  const auto clean = model.lossless();
  const auto bands = branch_windows(clean);
  const std::size_t expected = clean.resonance_count() + 1;
  const double b = (clean.eps_background() * clean.mu_background()).real();
  if (!(b > 0.0))
    throw BandError("frozen medium with eps*mu < 0 supports no transverse modes");
  if (bands.size() != expected)
    throw ConsistencyError("band count differs from n_e + n_m + 1");

  // Global capture from the companion matrix.
  const auto coeffs = dispersion_polynomial(clean, k);
  double bound = 0.0; // Cauchy bound on |x|
  for (std::size_t j = 1; j < coeffs.size(); ++j)
    bound = std::max(bound, std::abs(coeffs[j] / coeffs[0]));
  const auto captured =
      numerics::find_real_roots_poly(coeffs, {0.0, 1.0 + bound});
  std::vector<double> positive;
  for (double x : captured)
    if (x > 0.0)
      positive.push_back(x);
  if (positive.size() != expected) {
    std::ostringstream msg;
    msg << "dispersion polynomial has " << positive.size()
        << " positive real roots at k = " << k << ", expected " << expected;
    throw ConsistencyError(msg.str());
  }

  detail::LogDispersion phi;
  for (const auto *list : {&clean.electric(), &clean.magnetic()})
    for (const auto &r : *list) {
      phi.poles.push_back(r.omega_T * r.omega_T);
      phi.zeros.push_back(r.omega_L * r.omega_L);
    }
  phi.log_b = std::log(b);
  phi.log_k2 = 2.0 * std::log(k);

  BranchSolution sol;
  sol.k = k;
  for (std::size_t u = 0; u < bands.size(); ++u) {
    const double lo = bands[u].omega_lo * bands[u].omega_lo;
    const double hi = bands[u].omega_hi * bands[u].omega_hi;
    // Companion root inside the band as a starting point.
    double guess = positive[u];
    if (!(guess > lo && guess < hi))
      guess = std::isfinite(hi) ? (lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi)
                                : std::max(2.0 * lo, 1.0);
    const double x = detail::solve_in_band(phi, lo, hi, guess);
    BranchPoint bp;
    bp.u = static_cast<int>(u);
    bp.omega = std::sqrt(x);
    bp.k = k;
    const auto o = lossless_optics(clean, bp.omega);
    bp.eps = o.eps;
    bp.mu = o.mu;
    bp.eta_p = o.eta_p;
    bp.eta_g = group_index(clean, bp.omega);
    sol.branches.push_back(bp);
  }
  return sol;
}

struct SumRuleReport {
  double k = 0.0;
  // Raw sums over branches of eta_p/eta_g, 1/(eta_p eta_g),
  // eps/(eta_p eta_g) and mu/(eta_p eta_g); each should equal 1.
  double sum1 = 0.0;
  double sum2 = 0.0;
  double sum3 = 0.0;
  double sum4 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double s4 = 0.0;

  double max_residual() const { return std::max({s1, s2, s3, s4}); }
};

inline SumRuleReport sum_rule_report(const MediumModel &model, double k) {
  const auto sol = branch_frequencies(model, k);
  SumRuleReport r;
  r.k = k;
  for (const auto &bp : sol.branches) {
    const double pg = bp.eta_p * bp.eta_g;
    r.sum1 += bp.eta_p / bp.eta_g;
    r.sum2 += 1.0 / pg;
    r.sum3 += bp.eps / pg;
    r.sum4 += bp.mu / pg;
  }
  r.s1 = std::abs(r.sum1 - 1.0);
  r.s2 = std::abs(r.sum2 - 1.0);
  r.s3 = std::abs(r.sum3 - 1.0);
  r.s4 = std::abs(r.sum4 - 1.0);
  return r;
}

// Wave number on the branch through omega: k = |eta_p| omega / c.
inline double wave_number(const MediumModel &model, double omega) {
  const auto o = lossless_optics(model, omega);
  require_band(o, omega);
  return std::abs(o.eta_p) * omega;
}

} // namespace magpress
