#pragma once

// Single-photon momenta, the Abraham/Minkowski angular-momentum ratio, and the
// mode prefactors of the quantised field operators.

#include <cmath>
#include <numbers>

#include "magpress/medium.hpp"
#include "magpress/polariton.hpp"
#include "magpress/response.hpp"

namespace magpress {

// Momenta in units of hbar omega / c.
struct PhotonMomenta {
  double omega = 0.0;
  double p_M = 0.0;  // Minkowski (canonical): eta_p
  double p_GM = 0.0; // diagonal D x B mode value: eta_p^2 / eta_g
  double p_A = 0.0;  // Abraham (kinetic): 1 / eta_g
};

inline PhotonMomenta photon_momenta(const MediumModel &model, double omega) {
  const auto o = lossless_optics(model, omega);
  require_band(o, omega);
  const double eta_g = group_index(model, omega);
  PhotonMomenta p;
  p.omega = omega;
  p.p_M = o.eta_p;
  p.p_GM = o.eta_p * o.eta_p / eta_g;
  p.p_A = 1.0 / eta_g;
  return p;
}

// J_Abraham / J_Minkowski for a beam inside the medium. The Minkowski angular
// momentum is unchanged from free space.
inline double angular_momentum_ratio(const MediumModel &model, double omega) {
  const auto o = lossless_optics(model, omega);
  require_band(o, omega);
  return 1.0 / (o.eta_p * group_index(model, omega));
}

// Per-mode square-root prefactors of the A, E, B, D, H operators for branch u
// at wave number k, without the common (hbar/16 pi^3 eps0)^(1/2). B and H
// include the |k x e_k| = k factor. On a double-negative branch k is taken
// along the phase direction (negative) and D, H carry the signs of eps, mu so
// that D = eps E and B = mu H hold for the prefactors.
struct ModeNormalization {
  double omega = 0.0;
  double k = 0.0;
  int u = 0;
  double A_fac = 0.0;
  double E_fac = 0.0;
  double B_fac = 0.0;
  double D_fac = 0.0;
  double H_fac = 0.0;
};

inline ModeNormalization mode_normalization(const BranchPoint &bp) {
  const double w = bp.omega;
  const double pg = bp.eta_p * bp.eta_g;
  const double k_phase = bp.eta_p * w;
  ModeNormalization m;
  m.omega = w;
  m.k = bp.k;
  m.u = bp.u;
  m.A_fac = std::sqrt(bp.mu / (w * pg));
  m.E_fac = std::sqrt(w * bp.mu / pg);
  m.B_fac = k_phase * std::sqrt(bp.mu / (w * pg));
  m.D_fac = std::copysign(std::sqrt(w * bp.eps * bp.eta_p / bp.eta_g), bp.eps);
  m.H_fac = std::copysign(1.0, bp.mu) * k_phase * std::sqrt(1.0 / (w * bp.mu * pg));
  return m;
}

inline ModeNormalization mode_normalization(const MediumModel &model, double k,
                                            int u) {
  const auto sol = branch_frequencies(model, k);
  if (u < 0 || static_cast<std::size_t>(u) >= sol.branches.size()) {
    throw DomainError("branch index " + std::to_string(u) +
                      " does not exist; medium has " +
                      std::to_string(sol.branches.size()) + " branches");
  }
  return mode_normalization(sol.branches[static_cast<std::size_t>(u)]);
}

// (hbar / 16 pi^3 eps0)^(1/2): common factor of the 3D operators.
inline double operator_prefactor_3d() {
  return std::sqrt(1.0 / (16.0 * std::pow(std::numbers::pi, 3)));
}

// Beam of cross-section A: int d^3k -> (4 pi^2/A) int dk and
// a_k(3D) -> (sqrt(A)/2 pi) a_k(1D), so the prefactor gains 2 pi / sqrt(A).
inline double operator_prefactor_1d(double area) {
  const double pi = std::numbers::pi;
  return operator_prefactor_3d() * (4.0 * pi * pi / area) *
         (std::sqrt(area) / (2.0 * pi));
}

// Vacuum <E_x^2> and <H_y^2> per unit omega from the quantised 1D operators:
// the k-continuum amplitude squared times dk/domega = eta_g / c.
inline FluctuationSpectrum vacuum_spectra_quantum(const MediumModel &model,
                                                  double omega, double area) {
  if (!(area > 0.0))
    throw DomainError("beam area must be positive");
  if (!(omega > 0.0))
    throw DomainError("spectral density requires omega > 0");
  const auto clean = model.lossless();
  const auto o = lossless_optics(clean, omega);
  require_band(o, omega);
  BranchPoint bp;
  bp.omega = omega;
  bp.k = std::abs(o.eta_p) * omega;
  bp.eps = o.eps;
  bp.mu = o.mu;
  bp.eta_p = o.eta_p;
  bp.eta_g = group_index(clean, omega);
  const auto m = mode_normalization(bp);
  const double c1d = operator_prefactor_1d(area);
  FluctuationSpectrum s;
  s.omega = omega;
  s.E_sq = c1d * c1d * m.E_fac * m.E_fac * bp.eta_g;
  s.H_sq = c1d * c1d * m.H_fac * m.H_fac * bp.eta_g;
  return s;
}

} // namespace magpress
