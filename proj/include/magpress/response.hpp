#pragma once

// Classical linear response of the medium to electric and magnetic dipole
// stimuli, and the zero-temperature field-fluctuation spectra that follow
// from it through the Nyquist formula.
//
// Field and stimulus 6-vectors are f = (E, Z0 H) and s = V (p, m/c).

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "magpress/medium.hpp"

namespace magpress {

using Matrix6c = Eigen::Matrix<cplx, 6, 6>;
using Vector6c = Eigen::Matrix<cplx, 6, 1>;
using Vec3 = Eigen::Vector3d;

// Numerator of the response matrix (everything except 1/(eps0 V Den)).
inline Matrix6c response_numerator(cplx eps, cplx mu, cplx omega,
                                   const Vec3 &k) {
  const cplx a = omega * omega * mu;
  const cplx d = omega * omega * eps;
  const cplx kx = omega * k.x();
  const cplx ky = omega * k.y();
  const cplx kz = omega * k.z();
  const cplx o{0.0, 0.0};
  Matrix6c n;
  // clang-format off
  n <<  a,   o,   o,   o,   kz, -ky,
        o,   a,   o,  -kz,  o,   kx,
        o,   o,   a,   ky, -kx,  o,
        o,  -kz,  ky,  d,   o,   o,
        kz,  o,  -kx,  o,   d,   o,
       -ky,  kx,  o,   o,   o,   d;
  // clang-format on
  return n;
}

struct ResponseMatrix {
  double omega = 0.0;
  Vec3 k_vec = Vec3::Zero();
  double volume = 1.0;
  // c^2 k^2 - eps mu omega^2, common to every entry.
  cplx den;
  Matrix6c entries;
};

inline ResponseMatrix response_matrix(const MediumModel &model, double omega,
                                      const Vec3 &k_vec, double volume) {
  if (!(volume > 0.0))
    throw DomainError("sample volume must be positive");
  const cplx eps = permittivity(model, omega);
  const cplx mu = permeability(model, omega);
  ResponseMatrix t;
  t.omega = omega;
  t.k_vec = k_vec;
  t.volume = volume;
  t.den = k_vec.squaredNorm() - eps * mu * omega * omega;
  if (t.den == cplx(0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "response is singular: c^2 k^2 - eps mu omega^2 vanishes at omega = "
        << omega << ", |k| = " << k_vec.norm()
        << " (on the undamped polariton shell)";
    throw SingularResponseError(msg.str());
  }
  t.entries = response_numerator(eps, mu, omega, k_vec) / (volume * t.den);
  return t;
}

inline Vector6c apply_response(const ResponseMatrix &t, const Vector6c &s) {
  return t.entries * s;
}

struct FluctuationSpectrum {
  double omega = 0.0;
  double E_sq = 0.0; // <E_x^2>_omega (hbar = eps0 = mu0 = c = 1)
  double H_sq = 0.0; // <H_y^2>_omega

  double ratio() const { return E_sq / H_sq; }
};

// 1D beam fluctuation spectra for x-polarized waves along z:
//   <f_i f_i>_omega = (hbar L / 2 pi^2) int_0^inf dk Im T_ii.
// With vanishing damping, Im(1/Den) collapses onto the shell k = omega|eta_p|;
// the k-integral is taken as that residue, with the sign set by
// d(eps mu omega^2)/d omega = 2 omega eta_p eta_g.
inline FluctuationSpectrum spectral_density_1d(const MediumModel &model,
                                               double omega, double area,
                                               double length = 1.0) {
  if (!(area > 0.0) || !(length > 0.0))
    throw DomainError("beam area and sample length must be positive");
  if (!(omega > 0.0))
    throw DomainError("spectral density requires omega > 0");
  const auto clean = model.lossless();
  const auto o = lossless_optics(clean, omega);
  require_band(o, omega);
  const double eta_g = group_index(clean, omega);
  const double kappa = std::abs(o.eta_p) * omega;
  const double sign = (o.eta_p * eta_g > 0.0) ? 1.0 : -1.0;
  // int_0^inf dk Im(1/Den)
  const double residue = sign * std::numbers::pi / (2.0 * kappa);

  const Matrix6c n =
      response_numerator(o.eps, o.mu, omega, Vec3(0.0, 0.0, kappa));
  const double volume = length * area;
  const double nyquist = length / (2.0 * std::numbers::pi * std::numbers::pi);
  FluctuationSpectrum s;
  s.omega = omega;
  s.E_sq = nyquist * n(0, 0).real() / volume * residue;
  // Index 4 is Z0 H_y; Z0 = 1.
  s.H_sq = nyquist * n(4, 4).real() / volume * residue;
  return s;
}

} // namespace magpress
