#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "magpress/duality.hpp"

using namespace magpress;

namespace {
const double pi = std::numbers::pi;

double state_distance(const FieldState &a, const FieldState &b) {
  return (a.E - b.E).norm() + (a.H - b.H).norm() + (a.D - b.D).norm() +
         (a.B - b.B).norm() + (a.P - b.P).norm() + (a.M - b.M).norm() +
         (a.Pdot - b.Pdot).norm() + (a.Mdot - b.Mdot).norm();
}

std::vector<double> random_angles(std::mt19937_64 &rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
  std::vector<double> xi(static_cast<std::size_t>(n));
  for (auto &x : xi)
    x = u(rng);
  return xi;
}
} // namespace

TEST(Duality, IdentityAndPeriodicity) {
  std::mt19937_64 rng(61);
  const auto s = random_field_state(rng);
  EXPECT_EQ(state_distance(hl_rotate(s, {0.0}), s), 0.0);
  EXPECT_LT(state_distance(hl_rotate(s, {2.0 * pi}), s), 1e-14);
}

TEST(Duality, QuarterTurn) {
  std::mt19937_64 rng(67);
  const auto s = random_field_state(rng);
  const auto r = hl_rotate(s, {pi / 2.0});
  EXPECT_LT((r.E + s.H).norm(), 1e-15);
  EXPECT_LT((r.H - s.E).norm(), 1e-15);
  EXPECT_LT((r.M - s.P).norm(), 1e-15);
  EXPECT_LT((r.P + s.M).norm(), 1e-15);
}

TEST(Duality, GroupProperties) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_field_state(rng);
    const double a = u(rng), b = u(rng);
    EXPECT_LT(state_distance(hl_rotate(hl_rotate(s, {a}), {-a}), s), 1e-14);
    EXPECT_LT(state_distance(hl_rotate(hl_rotate(s, {a}), {b}), hl_rotate(s, {a + b})),
              1e-13);
    EXPECT_LT(hl_rotate(s, {a}).constitutive_residual(), 1e-14);
  }
}

TEST(Duality, EinsteinLaubSingleTerm) {
  FieldState s;
  s.P = Vec3::UnitX();
  s.Pdot = Vec3::UnitY();
  s.H = Vec3::UnitZ();
  const Vec3 f = einstein_laub_density(s, Mat3::Zero(), Mat3::Zero());
  EXPECT_LT((f - Vec3::UnitX()).norm(), 1e-16);
  EXPECT_EQ(einstein_laub_density(FieldState{}, Mat3::Zero(), Mat3::Zero()).norm(), 0.0);
  EXPECT_EQ(lorentz_density(FieldState{}, Mat3::Zero()).norm(), 0.0);
}

TEST(Duality, PlaneWaveForm) {
  // E along x, H along y, propagation along z, fields depending on z only.
  const double eps = 3.0, mu = 2.0, E = 0.7, H = -1.1, Edot = 0.4, Hdot = 2.3;
  const auto s = FieldState::from_sources(E * Vec3::UnitX(), H * Vec3::UnitY(),
                                          (eps - 1) * E * Vec3::UnitX(),
                                          (mu - 1) * H * Vec3::UnitY(),
                                          (eps - 1) * Edot * Vec3::UnitX(),
                                          (mu - 1) * Hdot * Vec3::UnitY());
  FieldGradients g;
  g.grad_E(0, 2) = 0.9;
  g.grad_H(1, 2) = -0.5;
  const Vec3 f = einstein_laub_density(s, g.grad_E, g.grad_H);
  EXPECT_NEAR(f.z(), (eps - 1) * Edot * H + (mu - 1) * E * Hdot, 1e-15);
  EXPECT_NEAR(f.x(), 0.0, 1e-15);
  EXPECT_NEAR(f.y(), 0.0, 1e-15);
}

TEST(Duality, LorentzDiffersByMagneticTerms) {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 50; ++i) {
    const auto s0 = random_field_state(rng, false);
    const auto g = random_gradients(rng);
    EXPECT_EQ(lorentz_density(s0, g.grad_E), einstein_laub_density(s0, g.grad_E, g.grad_H));
    const auto s = random_field_state(rng, true);
    const Vec3 diff = einstein_laub_density(s, g.grad_E, g.grad_H) - lorentz_density(s, g.grad_E);
    EXPECT_LT((diff - (g.grad_H * s.M - s.Mdot.cross(s.E))).norm(), 1e-14);
  }
}

TEST(Duality, EinsteinLaubInvariantLorentzNot) {
  std::mt19937_64 rng(79);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_field_state(rng);
    const auto g = random_gradients(rng);
    const auto rep = invariance_check(s, g, random_angles(rng, 32));
    EXPECT_LT(rep.max_dev_EL, 1e-12 * rep.scale);
    EXPECT_GT(rep.max_dev_L, 1e-3 * rep.scale);
  }
}

TEST(Duality, ElectrostaticStateWithoutGradients) {
  FieldState s = FieldState::from_sources(Vec3(1, 2, 0), Vec3::Zero(), Vec3(0.5, 0, 1),
                                          Vec3::Zero(), Vec3::Zero(), Vec3::Zero());
  std::mt19937_64 rng(83);
  const auto rep = invariance_check(s, FieldGradients{}, random_angles(rng, 32));
  EXPECT_EQ(rep.max_dev_EL, 0.0);
  EXPECT_EQ(rep.max_dev_L, 0.0);
  // With a field gradient the electric-only Lorentz force is no longer invariant.
  FieldGradients g;
  g.grad_E = Mat3::Identity();
  const auto rep2 = invariance_check(s, g, random_angles(rng, 32));
  EXPECT_LT(rep2.max_dev_EL, 1e-14 * rep2.scale);
  EXPECT_GT(rep2.max_dev_L, 1e-3 * rep2.scale);
}

TEST(Duality, BilinearInvariants) {
  std::mt19937_64 rng(89);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_field_state(rng);
    for (double xi : random_angles(rng, 32)) {
      const auto r = hl_rotate(s, {xi});
      EXPECT_NEAR(energy_density(r), energy_density(s), 1e-13);
      EXPECT_LT((poynting(r) - poynting(s)).norm(), 1e-13);
      EXPECT_LT((minkowski_density(r) - minkowski_density(s)).norm(), 1e-13);
      EXPECT_LT((abraham_density(r) - abraham_density(s)).norm(), 1e-13);
    }
  }
}
