#pragma once

// Heaviside-Larmor duality rotations of point field states and the force
// densities that are (Einstein-Laub) or are not (Lorentz) invariant under them.
// Natural units: eps0 = mu0 = c = Z0 = 1, so D = E + P and B = H + M.

#include <algorithm>
#include <cmath>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "magpress/errors.hpp"

namespace magpress {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct FieldState {
  Vec3 E = Vec3::Zero();
  Vec3 H = Vec3::Zero();
  Vec3 D = Vec3::Zero();
  Vec3 B = Vec3::Zero();
  Vec3 P = Vec3::Zero();
  Vec3 M = Vec3::Zero();
  Vec3 Pdot = Vec3::Zero();
  Vec3 Mdot = Vec3::Zero();

  // Builds a state whose D and B satisfy the constitutive relations.
  static FieldState from_sources(const Vec3 &E, const Vec3 &H, const Vec3 &P,
                                 const Vec3 &M, const Vec3 &Pdot,
                                 const Vec3 &Mdot) {
    FieldState s;
    s.E = E;
    s.H = H;
    s.P = P;
    s.M = M;
    s.Pdot = Pdot;
    s.Mdot = Mdot;
    s.D = E + P;
    s.B = H + M;
    return s;
  }

  // max(|D - E - P|, |B - H - M|)
  double constitutive_residual() const {
    return std::max((D - E - P).norm(), (B - H - M).norm());
  }
};

// G(i, j) = d_j F_i, so (P . grad) E = grad_E * P.
struct FieldGradients {
  Mat3 grad_E = Mat3::Zero();
  Mat3 grad_H = Mat3::Zero();
};

struct DualityAngle {
  double xi = 0.0;
};

// Primed state for angle xi. Inverts the unprimed-in-terms-of-primed map
//   E = E' cos + Z0 H' sin,  H = H' cos - E' sin / Z0,
//   D = D' cos + B' sin / Z0, B = B' cos - Z0 D' sin,
//   P = P' cos + M' sin / c,  M = M' cos - c P' sin.
inline FieldState hl_rotate(const FieldState &s, DualityAngle angle) {
  const double c = std::cos(angle.xi);
  const double sn = std::sin(angle.xi);
  FieldState r;
  r.E = c * s.E - sn * s.H;
  r.H = c * s.H + sn * s.E;
  r.D = c * s.D - sn * s.B;
  r.B = c * s.B + sn * s.D;
  r.P = c * s.P - sn * s.M;
  r.M = c * s.M + sn * s.P;
  r.Pdot = c * s.Pdot - sn * s.Mdot;
  r.Mdot = c * s.Mdot + sn * s.Pdot;
  return r;
}

// Gradients rotate like the fields they differentiate.
inline FieldGradients hl_rotate(const FieldGradients &g, DualityAngle angle) {
  const double c = std::cos(angle.xi);
  const double sn = std::sin(angle.xi);
  return {c * g.grad_E - sn * g.grad_H, c * g.grad_H + sn * g.grad_E};
}

// f = (P.grad)E + mu0 Pdot x H + mu0 (M.grad)H - eps0 mu0 Mdot x E
inline Vec3 einstein_laub_density(const FieldState &s, const Mat3 &grad_E,
                                  const Mat3 &grad_H) {
  return grad_E * s.P + s.Pdot.cross(s.H) + grad_H * s.M - s.Mdot.cross(s.E);
}

// f = (P.grad)E + mu0 Pdot x H
inline Vec3 lorentz_density(const FieldState &s, const Mat3 &grad_E) {
  return grad_E * s.P + s.Pdot.cross(s.H);
}

// Sum of the magnitudes of the four Einstein-Laub terms; the size against
// which cancellation and rounding are judged.
inline double force_scale(const FieldState &s, const FieldGradients &g) {
  return (g.grad_E * s.P).norm() + s.Pdot.cross(s.H).norm() +
         (g.grad_H * s.M).norm() + s.Mdot.cross(s.E).norm();
}

inline double energy_density(const FieldState &s) {
  return 0.5 * (s.E.dot(s.D) + s.B.dot(s.H));
}
inline Vec3 poynting(const FieldState &s) { return s.E.cross(s.H); }
inline Vec3 minkowski_density(const FieldState &s) { return s.D.cross(s.B); }
inline Vec3 abraham_density(const FieldState &s) { return s.E.cross(s.H); }

struct InvarianceReport {
  double max_dev_EL = 0.0;
  double max_dev_L = 0.0;
  double scale = 0.0;
};

inline InvarianceReport invariance_check(const FieldState &s,
                                         const FieldGradients &g,
                                         std::span<const double> xi_grid) {
  InvarianceReport rep;
  rep.scale = force_scale(s, g);
  const Vec3 el0 = einstein_laub_density(s, g.grad_E, g.grad_H);
  const Vec3 l0 = lorentz_density(s, g.grad_E);
  for (double xi : xi_grid) {
    const auto rs = hl_rotate(s, {xi});
    const auto rg = hl_rotate(g, {xi});
    rep.max_dev_EL = std::max(
        rep.max_dev_EL, (einstein_laub_density(rs, rg.grad_E, rg.grad_H) - el0).norm());
    rep.max_dev_L =
        std::max(rep.max_dev_L, (lorentz_density(rs, rg.grad_E) - l0).norm());
  }
  return rep;
}

// Uniform components in [-1, 1]. With magnetized = false, M and Mdot vanish.
template <class Rng>
FieldState random_field_state(Rng &rng, bool magnetized = true) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto vec = [&] { return Vec3(u(rng), u(rng), u(rng)); };
  const Vec3 E = vec();
  const Vec3 H = vec();
  const Vec3 P = vec();
  const Vec3 Pdot = vec();
  Vec3 M = vec();
  Vec3 Mdot = vec();
  if (!magnetized) {
    M.setZero();
    Mdot.setZero();
  }
  return FieldState::from_sources(E, H, P, M, Pdot, Mdot);
}

template <class Rng> FieldGradients random_gradients(Rng &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FieldGradients g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      g.grad_E(i, j) = u(rng);
      g.grad_H(i, j) = u(rng);
    }
  return g;
}

} // namespace magpress
