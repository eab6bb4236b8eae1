#pragma once

// Magneto-dielectric media built from products of Lorentz resonance factors.
//
// Units throughout the library are natural: c = eps0 = mu0 = hbar = 1, so
// Z0 = 1 and frequencies are in units of a reference frequency omega_ref.
// Damping enters each factor as omega^2 -> omega^2 + i gamma omega in both
// numerator and denominator, which keeps eps(inf) = mu(inf) = 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "magpress/errors.hpp"

namespace magpress {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ResonancePair {
  double omega_T = 1.0;
  double omega_L = 1.0;
  double gamma = 0.0;
};

enum class ResponseKind { electric, magnetic };

inline const char *to_string(ResponseKind kind) {
  return kind == ResponseKind::electric ? "electric" : "magnetic";
}

class MediumModel {
public:
  // Vacuum.
  MediumModel() = default;

  MediumModel(std::vector<ResonancePair> electric,
              std::vector<ResonancePair> magnetic,
              double degeneracy_tol = 1e-9)
      : electric_(std::move(electric)), magnetic_(std::move(magnetic)),
        degeneracy_tol_(degeneracy_tol) {
    validate();
  }

  // Constant eps and mu with no resonances at all. This deliberately breaks
  // the eps(inf) = mu(inf) = 1 structure and exists so that textbook
  // nondispersive results (eta_g = eta_p) can be checked. Small positive
  // imaginary parts give a finite attenuation length.
  static MediumModel frozen(cplx eps, cplx mu) {
    MediumModel m;
    m.eps_background_ = eps;
    m.mu_background_ = mu;
    m.validate();
    return m;
  }

  const std::vector<ResonancePair> &electric() const { return electric_; }
  const std::vector<ResonancePair> &magnetic() const { return magnetic_; }
  const std::vector<ResonancePair> &resonances(ResponseKind kind) const {
    return kind == ResponseKind::electric ? electric_ : magnetic_;
  }
  double degeneracy_tol() const { return degeneracy_tol_; }
  cplx eps_background() const { return eps_background_; }
  cplx mu_background() const { return mu_background_; }

  std::size_t resonance_count() const {
    return electric_.size() + magnetic_.size();
  }

  // True for a frozen-dispersion stub (background differs from 1).
  bool is_frozen() const {
    return eps_background_ != cplx(1.0) || mu_background_ != cplx(1.0);
  }

  bool is_lossless() const {
    auto undamped = [](const ResonancePair &r) { return r.gamma == 0.0; };
    return std::all_of(electric_.begin(), electric_.end(), undamped) &&
           std::all_of(magnetic_.begin(), magnetic_.end(), undamped) &&
           eps_background_.imag() == 0.0 && mu_background_.imag() == 0.0;
  }

  // Same resonances with every damping rate and background loss set to zero.
  MediumModel lossless() const {
    MediumModel m = *this;
    for (auto &r : m.electric_)
      r.gamma = 0.0;
    for (auto &r : m.magnetic_)
      r.gamma = 0.0;
    m.eps_background_ = eps_background_.real();
    m.mu_background_ = mu_background_.real();
    return m;
  }

  // Electric and magnetic lists exchanged (eps <-> mu everywhere).
  MediumModel swapped() const {
    MediumModel m = *this;
    std::swap(m.electric_, m.magnetic_);
    std::swap(m.eps_background_, m.mu_background_);
    return m;
  }

  // All transverse and longitudinal frequencies of both lists, ascending.
  // These are the poles and zeros of eps*mu.
  std::vector<double> breakpoints() const {
    std::vector<double> pts;
    for (const auto *list : {&electric_, &magnetic_})
      for (const auto &r : *list) {
        pts.push_back(r.omega_T);
        pts.push_back(r.omega_L);
      }
    std::sort(pts.begin(), pts.end());
    return pts;
  }

private:
  void validate() {
    if (!(degeneracy_tol_ >= 0.0) || !std::isfinite(degeneracy_tol_))
      throw ModelError("degeneracy_tol must be a finite non-negative number");
    for (auto kind : {ResponseKind::electric, ResponseKind::magnetic}) {
      auto &list = kind == ResponseKind::electric ? electric_ : magnetic_;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto &r = list[i];
        std::ostringstream where;
        where.precision(17);
        where << to_string(kind) << " resonance " << i << " (omega_T="
              << r.omega_T << ", omega_L=" << r.omega_L
              << ", gamma=" << r.gamma << ")";
        if (!std::isfinite(r.omega_T) || !std::isfinite(r.omega_L) ||
            !std::isfinite(r.gamma))
          throw ModelError(where.str() + ": parameters must be finite");
        if (!(r.omega_T > 0.0))
          throw ModelError(where.str() + ": omega_T must be positive");
        if (r.omega_L < r.omega_T)
          throw ModelError(where.str() + ": omega_L must not be below omega_T");
        if (r.omega_L - r.omega_T <= degeneracy_tol_)
          throw ModelError(where.str() +
                           ": omega_L equals omega_T (zero-strength resonance)");
        if (r.gamma < 0.0)
          throw ModelError(where.str() + ": gamma must be non-negative");
      }
      std::sort(list.begin(), list.end(),
                [](const ResonancePair &a, const ResonancePair &b) {
                  return a.omega_T < b.omega_T;
                });
      // Positive oscillator strengths: T1 < L1 < T2 < L2 < ...
      for (std::size_t i = 1; i < list.size(); ++i) {
        if (list[i].omega_T - list[i - 1].omega_L <= degeneracy_tol_) {
          std::ostringstream msg;
          msg << to_string(kind) << " resonances " << i - 1 << " and " << i
              << " overlap: each omega_L must lie below the next omega_T";
          throw ModelError(msg.str());
        }
      }
    }
    const auto pts = breakpoints();
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i] - pts[i - 1] <= degeneracy_tol_) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "electric and magnetic resonance frequencies coincide near "
            << pts[i] << "; eps*mu would have a cancelled or double pole";
        throw ModelError(msg.str());
      }
    }
    for (auto bg : {eps_background_, mu_background_}) {
      if (!std::isfinite(bg.real()) || !std::isfinite(bg.imag()))
        throw ModelError("frozen eps/mu must be finite");
      if (bg.real() == 0.0)
        throw ModelError("frozen eps/mu must have a nonzero real part");
      if (bg.imag() < 0.0)
        throw ModelError("frozen eps/mu must be passive (imaginary part >= 0)");
    }
  }

  std::vector<ResonancePair> electric_;
  std::vector<ResonancePair> magnetic_;
  double degeneracy_tol_ = 1e-9;
  cplx eps_background_{1.0, 0.0};
  cplx mu_background_{1.0, 0.0};
};

namespace detail {

inline cplx lorentz_product(const std::vector<ResonancePair> &list,
                            ResponseKind kind, cplx omega) {
  cplx value{1.0, 0.0};
  const cplx w2 = omega * omega;
  const cplx i{0.0, 1.0};
  for (std::size_t n = 0; n < list.size(); ++n) {
    const auto &r = list[n];
    const cplx damping = i * r.gamma * omega;
    const cplx den = r.omega_T * r.omega_T - w2 - damping;
    if (den == cplx(0.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "evaluation at the undamped pole of " << to_string(kind)
          << " resonance " << n << " (omega_T=" << r.omega_T << ")";
      throw PoleError(msg.str());
    }
    value *= (r.omega_L * r.omega_L - w2 - damping) / den;
  }
  return value;
}

// d ln(prod)/d omega for an undamped list at real omega.
inline double log_derivative(const std::vector<ResonancePair> &list,
                             double omega) {
  double d = 0.0;
  const double w2 = omega * omega;
  for (const auto &r : list)
    d += 2.0 * omega / (r.omega_T * r.omega_T - w2) -
         2.0 * omega / (r.omega_L * r.omega_L - w2);
  return d;
}

} // namespace detail

inline cplx permittivity(const MediumModel &model, cplx omega) {
  return model.eps_background() *
         detail::lorentz_product(model.electric(), ResponseKind::electric, omega);
}

inline cplx permeability(const MediumModel &model, cplx omega) {
  return model.mu_background() *
         detail::lorentz_product(model.magnetic(), ResponseKind::magnetic, omega);
}

struct StaticLimits {
  double eps0 = 1.0;
  double mu0 = 1.0;
  double eps_inf = 1.0;
  double mu_inf = 1.0;
  // |permittivity(0) - eps0| / |eps0|, and the same for mu.
  double eps0_check = 0.0;
  double mu0_check = 0.0;
};

// Zero- and infinite-frequency limits from the resonance products
// (generalized Lyddane-Sachs-Teller relation).
inline StaticLimits static_limit_report(const MediumModel &model) {
  StaticLimits s;
  auto lst = [](const std::vector<ResonancePair> &list) {
    double p = 1.0;
    for (const auto &r : list)
      p *= (r.omega_L / r.omega_T) * (r.omega_L / r.omega_T);
    return p;
  };
  s.eps_inf = model.eps_background().real();
  s.mu_inf = model.mu_background().real();
  s.eps0 = s.eps_inf * lst(model.electric());
  s.mu0 = s.mu_inf * lst(model.magnetic());
  s.eps0_check = std::abs(permittivity(model, 0.0).real() - s.eps0) /
                 std::abs(s.eps0);
  s.mu0_check =
      std::abs(permeability(model, 0.0).real() - s.mu0) / std::abs(s.mu0);
  return s;
}

// sqrt(eps)*sqrt(mu) with principal roots taken factor by factor. A real
// negative argument is treated as lying just above the branch cut, which
// gives Re(eta_p) < 0 when both eps and mu are negative.
inline cplx phase_index(cplx eps, cplx mu) {
  auto above_cut = [](cplx z) {
    return z.imag() == 0.0 ? cplx(z.real(), 0.0) : z;
  };
  return std::sqrt(above_cut(eps)) * std::sqrt(above_cut(mu));
}

// Real eps, mu and signed phase index of the lossless model at real omega.
struct LosslessOptics {
  double eps;
  double mu;
  double eta_p;
  bool propagating() const { return eps * mu > 0.0; }
};

inline LosslessOptics lossless_optics(const MediumModel &model, double omega) {
  const auto clean = model.is_lossless() ? model : model.lossless();
  const double eps = permittivity(clean, omega).real();
  const double mu = permeability(clean, omega).real();
  // Same branch as phase_index, with one rounding instead of two.
  const double eta = eps * mu > 0.0 ? std::copysign(std::sqrt(eps * mu), eps) : 0.0;
  return {eps, mu, eta};
}

inline void require_band(const LosslessOptics &o, double omega) {
  if (!o.propagating()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "omega = " << omega << " lies in a stop band (eps*mu = "
        << o.eps * o.mu << " <= 0)";
    throw BandError(msg.str());
  }
}

// eta_g = d(omega eta_p)/d omega by logarithmic differentiation of the
// rational products, evaluated on the lossless model.
inline double group_index(const MediumModel &model, double omega) {
  const auto clean = model.is_lossless() ? model : model.lossless();
  const auto o = lossless_optics(clean, omega);
  require_band(o, omega);
  const double dlog = detail::log_derivative(clean.electric(), omega) +
                      detail::log_derivative(clean.magnetic(), omega);
  return o.eta_p * (1.0 + 0.5 * omega * dlog);
}

// c / (2 omega Im eta_p) with the damped eps and mu; +inf without loss.
inline double attenuation_length(const MediumModel &model, double omega) {
  if (!(omega > 0.0))
    throw DomainError("attenuation_length requires omega > 0");
  const cplx eta =
      phase_index(permittivity(model, omega), permeability(model, omega));
  if (!(eta.imag() > 0.0))
    return kInf;
  return 1.0 / (2.0 * omega * eta.imag());
}

struct OpticalResponse {
  double omega = 0.0;
  cplx eps;
  cplx mu;
  cplx eta_p;
  // Group index of the lossless model; NaN in a stop band.
  cplx eta_g;
  double att_len = kInf;
};

inline OpticalResponse optical_response(const MediumModel &model,
                                        double omega) {
  OpticalResponse r;
  r.omega = omega;
  r.eps = permittivity(model, omega);
  r.mu = permeability(model, omega);
  r.eta_p = phase_index(r.eps, r.mu);
  const auto o = lossless_optics(model, omega);
  r.eta_g = o.propagating() ? group_index(model, omega)
                            : std::numeric_limits<double>::quiet_NaN();
  r.att_len = omega > 0.0 ? attenuation_length(model, omega) : kInf;
  return r;
}

} // namespace magpress
