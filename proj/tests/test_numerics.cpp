#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "magpress/numerics.hpp"

using namespace magpress;
using namespace magpress::numerics;

namespace {

// Multiply out prod (x - r_i) prod (x^2 - 2 a x + a^2 + b^2), descending.
std::vector<double> from_roots(const std::vector<double> &real,
                               const std::vector<std::complex<double>> &pairs,
                               double lead) {
  std::vector<double> c{lead};
  auto mul = [&](const std::vector<double> &f) {
    std::vector<double> out(c.size() + f.size() - 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j)
        out[i + j] += c[i] * f[j];
    c = out;
  };
  for (double r : real)
    mul({1.0, -r});
  for (auto z : pairs)
    mul({1.0, -2.0 * z.real(), std::norm(z)});
  return c;
}

// Independent oracle: scan for sign changes on a fine grid, then bisect.
std::vector<double> sign_scan_roots(const std::vector<double> &c, double lo,
                                    double hi, int samples) {
  auto p = [&](double x) {
    double v = 0.0;
    for (double ci : c)
      v = v * x + ci;
    return v;
  };
  std::vector<double> roots;
  double x0 = lo, f0 = p(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x1 = lo + (hi - lo) * i / samples;
    const double f1 = p(x1);
    if ((f0 < 0.0) != (f1 < 0.0)) {
      double a = x0, b = x1, fa = f0;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b)
          break;
        const double fm = p(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

// erfc by Taylor series of erf (|x| < 2) or Lentz continued fraction.
double erfc_oracle(double x) {
  const double pi = std::numbers::pi;
  if (x < 0.0)
    return 2.0 - erfc_oracle(-x);
  if (x < 2.0) {
    long double sum = 0.0L, term = x;
    for (int n = 0; n < 200; ++n) {
      sum += term / (2 * n + 1);
      term *= -static_cast<long double>(x) * x / (n + 1);
    }
    return static_cast<double>(1.0L - 2.0L / std::sqrt(static_cast<long double>(pi)) * sum);
  }
  // erfc x = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  double f = x, C = x, D = 0.0;
  for (int n = 1; n < 500; ++n) {
    const double a = n / 2.0;
    D = x + a * D;
    D = 1.0 / D;
    C = x + a / C;
    const double delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17)
      break;
  }
  return std::exp(-x * x) / std::sqrt(pi) / f;
}

} // namespace

TEST(Quadrature, GaussianOverRealLine) {
  QuadratureSpec spec;
  spec.decay_scale = 1.0 / std::sqrt(3.0);
  const auto r = integrate_adaptive([](double x) { return std::exp(-3.0 * x * x); },
                                    -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), spec);
  EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi / 3.0), 1e-13);
}

TEST(Quadrature, HalfLineExponential) {
  QuadratureSpec spec;
  spec.decay_scale = 0.5;
  spec.truncation_scales = 80.0;
  const auto r =
      integrate_adaptive([](double x) { return std::exp(-2.0 * x); }, 1.0, std::numeric_limits<double>::infinity(), spec);
  EXPECT_NEAR(r.value, 0.5 * std::exp(-2.0), 1e-14);
}

TEST(Quadrature, EndpointSingularity) {
  const auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Quadrature, ReversedLimitsFlipSign) {
  auto f = [](double x) { return std::cos(x); };
  EXPECT_NEAR(integrate_adaptive(f, 1.0, 0.0).value, -std::sin(1.0), 1e-14);
}

TEST(Quadrature, PiecewiseMatchesShiftedGaussian) {
  const double L = 100.0;
  const std::vector<double> breaks{-10 * L, 0.0, 10 * L};
  QuadratureSpec spec;
  const auto r = integrate_piecewise(
      [&](double t) { return std::exp(-2.0 * t * t / (L * L)); }, breaks, spec);
  EXPECT_NEAR(r.value / L, std::sqrt(std::numbers::pi / 2.0), 1e-12);
  EXPECT_NEAR(std::sqrt(std::numbers::pi / 2.0), 1.2533141373155002512, 4e-16);
}

TEST(Quadrature, NonConvergenceReportsWorstInterval) {
  QuadratureSpec spec;
  spec.max_subdivisions = 5;
  spec.rel_tol = 1e-14;
  spec.abs_tol = 1e-300;
  try {
    integrate_adaptive([](double x) { return std::sin(1.0 / x) / x; }, 1e-6, 1.0, spec);
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError &e) {
    EXPECT_LT(e.worst_lo, e.worst_hi);
    EXPECT_GT(e.worst_error, 0.0);
  }
}

TEST(Quadrature, RejectsBadSpec) {
  QuadratureSpec spec;
  spec.rel_tol = 0.0;
  EXPECT_THROW(integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, spec),
               DomainError);
  EXPECT_THROW(integrate_adaptive([](double) { return 1.0; }, std::nan(""), 1.0),
               DomainError);
}

TEST(Erfc, FrozenHighPrecisionValues) {
  EXPECT_NEAR(numerics::erfc(1.0), 0.1572992070502851306587793649, 1e-16);
  EXPECT_NEAR(numerics::erfc(0.5), 0.4795001221869534623, 1e-16);
  EXPECT_NEAR(numerics::erfc(3.0) / 2.209049699858544137e-5, 1.0, 1e-14);
  EXPECT_NEAR(numerics::erfc(-2.0), 1.995322265018952734, 1e-15);
  EXPECT_NEAR(numerics::erfc(10.0) / 2.088487583762544757e-45, 1.0, 1e-13);
  EXPECT_EQ(numerics::erfc(30.0), 0.0);
  EXPECT_EQ(numerics::erfc(-30.0), 2.0);
}

TEST(Erfc, AgreesWithSeriesAndContinuedFraction) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-6.0, 12.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    const double ref = erfc_oracle(x);
    EXPECT_NEAR(numerics::erfc(x), ref, 1e-13 * std::abs(ref) + 1e-300) << x;
  }
}

TEST(Roots, QuadraticGoldenRatio) {
  const auto r = find_real_roots_poly({1.0, -3.0, 1.0}, RootBracket(0.0, 10.0));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], 0.38196601125010515, 1e-15);
  EXPECT_NEAR(r[1], (3.0 + std::sqrt(5.0)) / 2.0, 1e-15);
}

TEST(Roots, MatchSignScanOracleOnRandomCubicsAndQuartics) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> root(-4.0, 4.0);
  std::uniform_real_distribution<double> imag(0.2, 2.0);
  std::uniform_real_distribution<double> lead(0.5, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int degree = 3 + trial % 2;
    const bool with_pair = trial % 3 == 0;
    std::vector<double> real;
    while (static_cast<int>(real.size()) < degree - (with_pair ? 2 : 0)) {
      const double r = root(rng);
      bool far = true;
      for (double q : real)
        far = far && std::abs(q - r) > 0.05;
      if (far)
        real.push_back(r);
    }
    std::vector<std::complex<double>> pairs;
    if (with_pair)
      pairs.push_back({root(rng), imag(rng)});
    const double a = (trial % 5 == 0 ? -1.0 : 1.0) * lead(rng);
    const auto c = from_roots(real, pairs, a);
    const auto got = find_real_roots_poly(c, RootBracket(-5.0, 5.0));
    const auto want = sign_scan_roots(c, -5.0, 5.0, 20000);
    ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
    for (std::size_t i = 0; i < got.size(); ++i)
      EXPECT_NEAR(got[i], want[i], 1e-9) << "trial " << trial;
  }
}

TEST(Roots, WindowFiltersRoots) {
  const auto c = from_roots({-1.0, 0.5, 2.0}, {}, 1.0);
  const auto r = find_real_roots_poly(c, RootBracket(0.0, 1.0));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0], 0.5, 1e-14);
}

TEST(Roots, RepeatedRootThrows) {
  const auto c = from_roots({1.0, 1.0, 3.0}, {}, 1.0);
  EXPECT_THROW(find_real_roots_poly(c, RootBracket(0.0, 5.0)), DegenerateRootError);
}

TEST(Roots, BadInputRejected) {
  EXPECT_THROW(find_real_roots_poly({0.0, 1.0}, RootBracket(0.0, 1.0)), DomainError);
  EXPECT_THROW(RootBracket(1.0, 1.0), DomainError);
}

TEST(Derivative, RichardsonIsAccurate) {
  const double d = derivative_central([](double x) { return std::sin(x); }, 0.7, 1e-2);
  EXPECT_NEAR(d, std::cos(0.7), 1e-12);
  EXPECT_THROW(derivative_central([](double x) { return x; }, 0.0, 0.0), DomainError);
}

TEST(Bisect, FindsSqrtTwo) {
  EXPECT_NEAR(bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0), std::sqrt(2.0),
              1e-15);
  EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, 0.0, 1.0), DomainError);
}
