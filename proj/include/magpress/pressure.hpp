#pragma once

// Radiation pressure of a single-photon Gaussian pulse normally incident from
// vacuum onto a magneto-dielectric half-space z > 0.
//
// Units: c = hbar = 1 and every momentum is in units of hbar omega0 / c, so
// force densities carry an implicit factor hbar omega0. Optical parameters are
// frozen at the carrier frequency; damping enters only via the attenuation
// length, while R, T, eps, mu, eta_p, eta_g come from the lossless model.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "magpress/medium.hpp"
#include "magpress/numerics.hpp"

namespace magpress {

struct PulseSpec {
  double omega0 = 1.0;
  double L = 100.0; // pulse length in c / omega_ref
  double area = 1.0;

  // Narrow-band condition c/L << omega0, enforced as L omega0 / c > 10.
  void validate() const {
    if (!(omega0 > 0.0) || !(L > 0.0) || !(area > 0.0))
      throw DomainError("pulse omega0, L and area must be positive");
    if (!(L * omega0 > 10.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "pulse is not narrow-band: L omega0 / c = " << L * omega0
          << " must exceed 10";
      throw DomainError(msg.str());
    }
  }
};

struct FresnelCoefficients {
  double R = 0.0;
  double T = 0.0;
};

inline FresnelCoefficients fresnel_from(double eps, double mu) {
  if (!(eps * mu > 0.0))
    throw BandError("Fresnel coefficients need eps*mu > 0");
  const double r = std::sqrt(eps / mu);
  return {-(r - 1.0) / (r + 1.0), 2.0 / (r + 1.0)};
}

inline FresnelCoefficients fresnel(const MediumModel &model, double omega) {
  const auto o = lossless_optics(model, omega);
  require_band(o, omega);
  return fresnel_from(o.eps, o.mu);
}

// Gaussian spectral amplitude, normalized so that int xi^2 d omega = 1.
inline double pulse_amplitude(const PulseSpec &pulse, double omega) {
  const double L = pulse.L;
  const double dw = omega - pulse.omega0;
  return std::pow(L * L / (2.0 * std::numbers::pi), 0.25) *
         std::exp(-L * L * dw * dw / 4.0);
}

// Optical parameters at the carrier frequency.
struct CarrierOptics {
  double omega0 = 0.0;
  double eps = 1.0;
  double mu = 1.0;
  double eta_p = 1.0;
  double eta_g = 1.0;
  double ell = kInf;
};

class HalfSpaceScenario {
public:
  HalfSpaceScenario(MediumModel model, PulseSpec pulse)
      : model_(std::move(model)), pulse_(pulse) {
    pulse_.validate();
    const auto o = lossless_optics(model_, pulse_.omega0);
    require_band(o, pulse_.omega0);
    optics_.omega0 = pulse_.omega0;
    optics_.eps = o.eps;
    optics_.mu = o.mu;
    optics_.eta_p = o.eta_p;
    optics_.eta_g = group_index(model_, pulse_.omega0);
    optics_.ell = attenuation_length(model_, pulse_.omega0);
  }

  const MediumModel &model() const { return model_; }
  const PulseSpec &pulse() const { return pulse_; }
  const CarrierOptics &optics() const { return optics_; }

  // eta_g (eps + mu) - 2 eta_p: weight of the surface term.
  double surface_weight() const {
    return optics_.eta_g * (optics_.eps + optics_.mu) - 2.0 * optics_.eta_p;
  }

  double length_ratio() const { return pulse_.L / optics_.ell; }

private:
  MediumModel model_;
  PulseSpec pulse_;
  CarrierOptics optics_;
};

// Normal-ordered single-photon expectation of the z Einstein-Laub force
// density at depth z and time t. The linear-in-retarded-time term carries
// eta_g (eps + mu) - 2 eta_p, the coefficient for which the depth integral
// reproduces the total-force expression below.
inline double force_density(const HalfSpaceScenario &scn, double z, double t) {
  if (z < 0.0)
    throw DomainError("force density is defined inside the medium, z >= 0");
  const auto &o = scn.optics();
  const double L = scn.pulse().L;
  const double tau = t - o.eta_g * z;
  const double pref = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * o.eta_p *
                             scn.pulse().area * L);
  const double absorb = std::isinf(o.ell) ? 0.0 : (o.eps + o.mu) / o.ell;
  const double decay = std::isinf(o.ell) ? 0.0 : z / o.ell;
  const double bracket = absorb - scn.surface_weight() * (4.0 / (L * L)) * tau;
  return pref * bracket * std::exp(-2.0 * tau * tau / (L * L) - decay);
}

// The two terms of the closed-form total force (long attenuation length,
// L << ell): bulk absorption and surface transfer.
struct ForceTerms {
  double bulk = 0.0;
  double surface = 0.0;
  double total() const { return bulk + surface; }
};

inline ForceTerms total_force_terms(const HalfSpaceScenario &scn, double t) {
  const auto &o = scn.optics();
  const double L = scn.pulse().L;
  const double pi = std::numbers::pi;
  const double pref = 1.0 / (std::sqrt(2.0 * pi) * o.eta_p * o.eta_g);
  ForceTerms f;
  if (!std::isinf(o.ell)) {
    const double kappa = o.eta_g * o.ell;
    const double e = numerics::erfc(std::sqrt(2.0) * (-t / L + L / (4.0 * kappa)));
    if (e > 0.0)
      f.bulk = pref * (o.eta_p / kappa) * std::sqrt(pi / 2.0) * e *
               std::exp(-t / kappa);
  }
  const double shift =
      std::isinf(o.ell) ? 0.0 : L * L / (8.0 * o.eta_g * o.eta_g * o.ell * o.ell);
  f.surface = pref * (scn.surface_weight() / L) *
              std::exp(-2.0 * t * t / (L * L) - shift);
  return f;
}

// Depth window holding the pulse at time t: |t - eta_g z| < 20 decay scales
// of the Gaussian (scale L / sqrt 2).
inline std::array<double, 2> pulse_depth_window(const HalfSpaceScenario &scn,
                                                double t) {
  const double reach = 20.0 * scn.pulse().L / std::sqrt(2.0);
  const double eta_g = scn.optics().eta_g;
  return {std::max(0.0, (t - reach) / eta_g), std::max(0.0, (t + reach) / eta_g)};
}

inline double force_scale(const HalfSpaceScenario &scn) {
  const auto &o = scn.optics();
  const double pref =
      1.0 / (std::sqrt(2.0 * std::numbers::pi) * std::abs(o.eta_p * o.eta_g));
  const double bulk =
      std::isinf(o.ell) ? 0.0 : std::abs(o.eta_p) / (o.eta_g * o.ell) * 2.0;
  return pref * (bulk + std::abs(scn.surface_weight()) / scn.pulse().L);
}

// A * int_0^inf dz force_density(z, t) by adaptive quadrature over the depth
// window of the pulse. The absolute tolerance follows the absorption envelope,
// so the slow bulk tail is resolved relative to its own size.
inline double total_force_numeric(const HalfSpaceScenario &scn, double t) {
  const auto [z0, z1] = pulse_depth_window(scn, t);
  if (!(z1 > z0))
    return 0.0;
  const auto &o = scn.optics();
  const double envelope =
      std::isinf(o.ell) ? 1.0 : std::exp(-z0 / o.ell);
  numerics::QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  spec.abs_tol = 1e-12 * force_scale(scn) * envelope / scn.pulse().area;
  const auto r = numerics::integrate_adaptive(
      [&](double z) { return force_density(scn, z, t); }, z0, z1, spec);
  return scn.pulse().area * r.value;
}

struct TotalForce {
  double analytic = 0.0;
  double numeric = 0.0;
  // The closed form neglects terms of order (L / ell)^2; quoted for L/ell < 0.01.
  bool analytic_valid = false;
};

inline TotalForce total_force(const HalfSpaceScenario &scn, double t) {
  TotalForce f;
  f.analytic = total_force_terms(scn, t).total();
  f.numeric = total_force_numeric(scn, t);
  f.analytic_valid = scn.length_ratio() < 0.01;
  return f;
}

struct MomentumBudget {
  double p_total = 0.0;
  double bulk = 0.0;
  double surface = 0.0;
  double numeric_total = 0.0;
  double numeric_bulk = 0.0;
  double numeric_surface = 0.0;
  // |numeric_total - p_total| / |p_total|
  double closure_residual = 0.0;
  bool closed = false;
};

// Time window for momentum integrals: from -10 L/c to
// max(10 L/c, 30 eta_g ell / c), which covers the slow bulk absorption tail.
inline std::array<double, 3> budget_time_breaks(const HalfSpaceScenario &scn) {
  const double L = scn.pulse().L;
  const double tail = 30.0 * scn.optics().eta_g * scn.optics().ell;
  return {-10.0 * L, 10.0 * L, std::max(10.0 * L, tail)};
}

inline MomentumBudget momentum_budget(const HalfSpaceScenario &scn,
                                      double closure_tol = 1e-4) {
  const auto &o = scn.optics();
  if (std::isinf(o.ell))
    throw DomainError("momentum budget needs a finite attenuation length "
                      "(add damping at the carrier frequency)");
  MomentumBudget b;
  b.p_total = (o.eps + o.mu) / (2.0 * o.eta_p);
  b.bulk = 1.0 / o.eta_g;
  b.surface = (o.eps + o.mu) / (2.0 * o.eta_p) - 1.0 / o.eta_g;

  const auto breaks = budget_time_breaks(scn);
  // In the tail the depth integral cancels down to the bulk term, losing about
  // eta_g ell / L in relative precision.
  numerics::QuadratureSpec spec;
  spec.rel_tol = std::max(1e-9, 1e-13 * o.eta_g * o.ell / scn.pulse().L);
  spec.abs_tol = 1e-13 * std::max(std::abs(b.p_total), std::abs(b.bulk));
  b.numeric_total =
      numerics::integrate_piecewise(
          [&](double t) { return total_force_numeric(scn, t); }, breaks, spec)
          .value;
  b.numeric_bulk = numerics::integrate_piecewise(
                       [&](double t) { return total_force_terms(scn, t).bulk; },
                       breaks, spec)
                       .value;
  b.numeric_surface =
      numerics::integrate_piecewise(
          [&](double t) { return total_force_terms(scn, t).surface; }, breaks,
          spec)
          .value;
  b.closure_residual = std::abs(b.numeric_total - b.p_total) / std::abs(b.p_total);
  b.closed = b.closure_residual <= closure_tol;
  return b;
}

// |(1 + R^2) - sqrt(eps/mu) T^2 (eps + mu) / (2 eta_p)| for lossless eps, mu:
// incident-minus-reflected momentum against the transmitted share.
inline double incident_momentum_residual(double eps, double mu) {
  const auto f = fresnel_from(eps, mu);
  const double eta_p = std::copysign(std::sqrt(eps * mu), eps);
  const double lhs = 1.0 + f.R * f.R;
  const double rhs = std::sqrt(eps / mu) * f.T * f.T * (eps + mu) / (2.0 * eta_p);
  return std::abs(lhs - rhs);
}

inline double incident_momentum_check(const HalfSpaceScenario &scn) {
  return incident_momentum_residual(scn.optics().eps, scn.optics().mu);
}

} // namespace magpress
