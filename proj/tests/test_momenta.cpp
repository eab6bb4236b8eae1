#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "magpress/momenta.hpp"
#include "support/random_media.hpp"

using namespace magpress;

namespace {
MediumModel golden() { return MediumModel({{1.0, std::sqrt(2.0), 0.0}}, {}); }
MediumModel dng() { return MediumModel({{1.0, 1.5, 0.0}}, {{1.2, 1.7, 0.0}}); }
const double kPhi = 1.6180339887498948482;
const double kInvPhi = 0.6180339887498948482;
} // namespace

TEST(Momenta, VacuumAndFrozen) {
  const auto v = photon_momenta(MediumModel(), 1.0);
  EXPECT_DOUBLE_EQ(v.p_M, 1.0);
  EXPECT_DOUBLE_EQ(v.p_GM, 1.0);
  EXPECT_DOUBLE_EQ(v.p_A, 1.0);
  const auto f = MediumModel::frozen(4.0, 1.0);
  const auto p = photon_momenta(f, 0.2);
  EXPECT_DOUBLE_EQ(p.p_M, 2.0);
  EXPECT_DOUBLE_EQ(p.p_GM, 2.0);
  EXPECT_DOUBLE_EQ(p.p_A, 0.5);
  EXPECT_DOUBLE_EQ(angular_momentum_ratio(f, 0.2), 0.25);
  EXPECT_DOUBLE_EQ(angular_momentum_ratio(MediumModel(), 0.2), 1.0);
}

TEST(Momenta, GoldenLowerBranch) {
  const auto p = photon_momenta(golden(), kInvPhi);
  EXPECT_NEAR(p.p_M, kPhi, 1e-12);
  EXPECT_NEAR(p.p_A, 1.0 / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(p.p_GM, kPhi * kPhi / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(angular_momentum_ratio(golden(), kInvPhi), 1.0 / (kPhi * std::sqrt(5.0)), 1e-12);
}

TEST(Momenta, PerBranchIdentities) {
  std::mt19937_64 rng(53);
  for (int n = 0; n < 20; ++n) {
    const auto m = test_support::random_medium(rng);
    for (const auto &b : branch_frequencies(m, 1.3).branches) {
      const auto p = photon_momenta(m, b.omega);
      EXPECT_NEAR(p.p_M, b.eta_p, 1e-12 * std::abs(b.eta_p));
      EXPECT_NEAR(p.p_A * b.eta_g, 1.0, 1e-12);
      EXPECT_NEAR(p.p_GM * b.eta_g, b.eta_p * b.eta_p, 1e-12 * b.eta_p * b.eta_p);
    }
  }
}

TEST(Momenta, DoubleNegativeSigns) {
  const auto p = photon_momenta(dng(), 1.35);
  EXPECT_LT(p.p_M, 0.0);
  EXPECT_GT(p.p_GM, 0.0);
  EXPECT_GT(p.p_A, 0.0);
  EXPECT_THROW(photon_momenta(golden(), 1.2), BandError);
}

TEST(ModeNormalization, VacuumIsUnity) {
  const auto m = mode_normalization(MediumModel(), 1.0, 0);
  for (double f : {m.A_fac, m.E_fac, m.B_fac, m.D_fac, m.H_fac})
    EXPECT_NEAR(f, 1.0, 1e-15);
}

TEST(ModeNormalization, ConstitutiveIdentities) {
  for (const auto &med : {golden(), dng()}) {
    for (double k : {0.3, 1.0, 2.2}) {
      for (const auto &b : branch_frequencies(med, k).branches) {
        const auto m = mode_normalization(b);
        EXPECT_NEAR(m.D_fac, b.eps * m.E_fac, 1e-12 * std::abs(m.D_fac));
        EXPECT_NEAR(m.B_fac, b.mu * m.H_fac, 1e-12 * std::abs(m.B_fac));
        EXPECT_NEAR(m.E_fac, b.omega * m.A_fac, 1e-12 * m.E_fac);
      }
    }
  }
  EXPECT_THROW(mode_normalization(golden(), 1.0, 2), DomainError);
  EXPECT_THROW(mode_normalization(golden(), 1.0, -1), DomainError);
}

TEST(ModeNormalization, BeamPrefactor) {
  for (double a : {0.5, 1.0, 7.0})
    EXPECT_NEAR(operator_prefactor_1d(a) / operator_prefactor_3d(),
                2.0 * std::numbers::pi / std::sqrt(a), 1e-14);
}

TEST(Spectra, QuantumRouteExamples) {
  const auto v = vacuum_spectra_quantum(MediumModel(), 1.3, 2.0);
  const auto r = spectral_density_1d(MediumModel(), 1.3, 2.0);
  EXPECT_NEAR(v.E_sq / r.E_sq, 1.0, 1e-15);
  EXPECT_NEAR(v.H_sq / r.H_sq, 1.0, 1e-15);
  const auto q = vacuum_spectra_quantum(golden(), 0.5, 1.0);
  const auto n = spectral_density_1d(golden(), 0.5, 1.0);
  EXPECT_NEAR(q.E_sq / n.E_sq, 1.0, 1e-10);
  const auto s = vacuum_spectra_quantum(golden().swapped(), 0.5, 1.0);
  EXPECT_NEAR(s.H_sq / q.E_sq, 1.0, 1e-12);
}
