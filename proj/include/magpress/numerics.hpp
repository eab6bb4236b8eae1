#pragma once

// Quadrature, polynomial roots, finite differences and erfc shared by the
// physics modules. Everything here is a pure function of its arguments.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magpress/errors.hpp"

namespace magpress::numerics {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  // Infinite limits are replaced by finite ones placed truncation_scales
  // decay scales away from the finite end (or from 0 if both are infinite).
  double decay_scale = 1.0;
  double truncation_scales = 20.0;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1)
      throw DomainError("max_subdivisions must be at least 1");
    if (!(decay_scale > 0.0) || !(truncation_scales > 0.0))
      throw DomainError("truncation decay scale must be positive");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod rule with its embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment &o) const { return error < o.error; }
};

template <class F> Segment kronrod15(F &f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(centre);
  if (!std::isfinite(fc))
    throw DomainError("integrand is not finite at x = " + std::to_string(centre));
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    if (!std::isfinite(f1[j]) || !std::isfinite(f2[j]))
      throw DomainError("integrand is not finite near x = " +
                        std::to_string(centre - dx));
    kronrod += kKronrodWeights[j] * (f1[j] + f2[j]);
    abs_sum += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1)
      gauss += kGaussWeights[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  double err = std::abs((kronrod - gauss) * half);
  asc *= std::abs(half);
  if (asc != 0.0 && err != 0.0)
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double round = 50.0 * std::numeric_limits<double>::epsilon() *
                       abs_sum * std::abs(half);
  err = std::max(err, round);
  return {lo, hi, kronrod * half, err};
}

} // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) quadrature. Intervals with the
// largest error estimate are bisected until the summed estimate falls below
// max(abs_tol, rel_tol*|I|). Infinite limits are truncated per QuadratureSpec.
template <class F>
QuadratureResult integrate_adaptive(F &&f, double a, double b,
                                    const QuadratureSpec &spec = {}) {
  spec.validate();
  if (std::isnan(a) || std::isnan(b))
    throw DomainError("integration limits must not be NaN");
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double span = spec.truncation_scales * spec.decay_scale;
  const bool a_inf = std::isinf(a);
  const bool b_inf = std::isinf(b);
  if (a_inf && b_inf) {
    a = -span;
    b = span;
  } else if (a_inf) {
    a = b - span;
  } else if (b_inf) {
    b = a + span;
  }
  QuadratureResult result;
  if (a == b)
    return result;

  std::priority_queue<detail::Segment> heap;
  auto first = detail::kronrod15(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  int evaluations = 15;

  auto done = [&] {
    return error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  };
  int subdivisions = 0;
  while (!done()) {
    if (subdivisions >= spec.max_subdivisions) {
      const auto worst = heap.top();
      std::ostringstream msg;
      msg.precision(17);
      msg << "adaptive quadrature did not converge after " << subdivisions
          << " subdivisions: estimate " << total << " +/- " << error
          << ", worst subinterval [" << worst.lo << ", " << worst.hi
          << "] with error " << worst.error;
      throw QuadratureError(msg.str(), worst.lo, worst.hi, worst.error);
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "adaptive quadrature hit floating-point resolution on ["
          << worst.lo << ", " << worst.hi << "]";
      throw QuadratureError(msg.str(), worst.lo, worst.hi, worst.error);
    }
    auto left = detail::kronrod15(f, worst.lo, mid);
    auto right = detail::kronrod15(f, mid, worst.hi);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
    // Re-sum periodically to stop drift in the running totals.
    if (subdivisions % 64 == 0) {
      auto copy = heap;
      total = 0.0;
      error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  result.value = sign * total;
  result.abs_error = error;
  result.subdivisions = subdivisions;
  result.evaluations = evaluations;
  return result;
}

// Integrate over consecutive pieces [x0,x1], [x1,x2], ... and sum. Useful when
// the integrand has features (narrow peaks) at known locations.
template <class F>
QuadratureResult integrate_piecewise(F &&f, std::span<const double> breaks,
                                     const QuadratureSpec &spec = {}) {
  QuadratureResult sum;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1]))
      continue;
    const auto part = integrate_adaptive(f, breaks[i], breaks[i + 1], spec);
    sum.value += part.value;
    sum.abs_error += part.abs_error;
    sum.subdivisions += part.subdivisions;
    sum.evaluations += part.evaluations;
  }
  return sum;
}

struct RootBracket {
  double lo;
  double hi;

  RootBracket(double lo, double hi) : lo(lo), hi(hi) {
    if (!(lo < hi))
      throw DomainError("root bracket requires lo < hi");
  }
};

// Value and first derivative of a polynomial given in descending powers.
struct PolyEval {
  double value;
  double derivative;
  double scale; // sum |c_i| |x|^i, the natural size of the rounding error
};

inline PolyEval eval_poly(std::span<const double> coeffs, double x) {
  double p = 0.0;
  double dp = 0.0;
  double s = 0.0;
  const double ax = std::abs(x);
  for (double c : coeffs) {
    dp = dp * x + p;
    p = std::fma(p, x, c);
    s = s * ax + std::abs(c);
  }
  return {p, dp, s};
}

// All real roots of the polynomial inside window, ascending. Roots are
// captured as eigenvalues of the companion matrix and polished by Newton's
// method on the original coefficients. A repeated root in the window throws
// DegenerateRootError instead of being deflated.
inline std::vector<double> find_real_roots_poly(std::span<const double> coeffs,
                                                const RootBracket &window) {
  if (coeffs.empty() || coeffs.front() == 0.0)
    throw DomainError("polynomial leading coefficient must be nonzero");
  for (double c : coeffs)
    if (!std::isfinite(c))
      throw DomainError("polynomial coefficients must be finite");

  const auto degree = static_cast<Eigen::Index>(coeffs.size() - 1);
  std::vector<double> candidates;
  if (degree == 1) {
    candidates.push_back(-coeffs[1] / coeffs[0]);
  } else if (degree > 1) {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (Eigen::Index j = 0; j < degree; ++j)
      companion(0, j) = -coeffs[static_cast<std::size_t>(j + 1)] / coeffs[0];
    for (Eigen::Index i = 1; i < degree; ++i)
      companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
      throw ConsistencyError("companion-matrix eigenvalue solve failed");
    for (const auto &lambda : solver.eigenvalues()) {
      if (std::abs(lambda.imag()) <= 1e-6 * std::max(1.0, std::abs(lambda)))
        candidates.push_back(lambda.real());
    }
  }

  const double width = window.hi - window.lo;
  std::vector<double> roots;
  for (double x : candidates) {
    for (int it = 0; it < 60; ++it) {
      const auto pe = eval_poly(coeffs, x);
      if (pe.derivative == 0.0)
        break;
      const double step = pe.value / pe.derivative;
      x -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                std::max(1.0, std::abs(x)))
        break;
    }
    // Newton does not settle from a spurious near-real eigenvalue.
    if (const auto pe = eval_poly(coeffs, x);
        std::abs(pe.value) > 1e-8 * pe.scale)
      continue;
    const double slack = 1e-14 * std::max({1.0, std::abs(window.lo),
                                           std::abs(window.hi)});
    if (x < window.lo - slack || x > window.hi + slack)
      continue;
    roots.push_back(std::clamp(x, window.lo, window.hi));
  }
  std::sort(roots.begin(), roots.end());

  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto pe = eval_poly(coeffs, roots[i]);
    double dscale = 0.0;
    const double ax = std::abs(roots[i]);
    for (std::size_t j = 0; j + 1 < coeffs.size(); ++j)
      dscale = dscale * ax +
               std::abs(coeffs[j]) * static_cast<double>(coeffs.size() - 1 - j);
    const bool flat = std::abs(pe.derivative) <= 1e-9 * dscale;
    const bool twin =
        i > 0 && std::abs(roots[i] - roots[i - 1]) <=
                     1e-10 * std::max({1.0, std::abs(roots[i]), width});
    if (flat || twin) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "repeated root near x = " << roots[i] << " in window ["
          << window.lo << ", " << window.hi << "]";
      throw DegenerateRootError(msg.str());
    }
  }
  return roots;
}

inline std::vector<double> find_real_roots_poly(const std::vector<double> &coeffs,
                                                const RootBracket &window) {
  return find_real_roots_poly(std::span<const double>(coeffs), window);
}

// Central difference with two levels of Richardson extrapolation over the
// step sizes h, h/2, h/4. Error is O(h^6) for smooth f.
template <class F> double derivative_central(F &&f, double x, double h) {
  if (!(h > 0.0))
    throw DomainError("finite-difference step must be positive");
  std::array<double, 3> d{};
  double step = h;
  for (double &di : d) {
    const double fp = f(x + step);
    const double fm = f(x - step);
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw DomainError("non-finite sample in central difference at x = " +
                        std::to_string(x));
    di = (fp - fm) / (2.0 * step);
    step *= 0.5;
  }
  const double r1 = (4.0 * d[1] - d[0]) / 3.0;
  const double r2 = (4.0 * d[2] - d[1]) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

// Bisection on a sign change. Used to refine roots where Newton is unsafe.
template <class F>
double bisect(F &&f, double lo, double hi, int max_iter = 200) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw DomainError("bisect: no sign change across bracket");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi))
      break;
    const double fm = f(mid);
    if (fm == 0.0)
      return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double erfc(double x) { return std::erfc(x); }

} // namespace magpress::numerics
