#pragma once

#include <cmath>
#include <complex>

#include "atomphase/common.hpp"
#include "atomphase/quadrature.hpp"

namespace atomphase {

/// Single-resonance Lorentz dielectric. All frequencies are measured in
/// units of the transverse resonance frequency, which therefore never
/// appears as a runtime number.
struct LorentzMedium {
  double omega_p = 0.5;  ///< coupling constant (omega_T units), > 0
  double gamma = 1e-3;   ///< absorption linewidth (omega_T units), > 0

  void validate() const {
    if (!(omega_p > 0.0) || !std::isfinite(omega_p))
      throw ConfigError("medium.omega_p must be > 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw ConfigError("medium.gamma must be > 0");
  }
};

/// eps(omega) = 1 + omega_p^2 / (1 - omega^2 - i*omega*gamma), exact
/// complex arithmetic. Requires omega > 0.
inline Complex eval_permittivity(const LorentzMedium& medium, double omega) {
  if (!(omega > 0.0))
    throw std::domain_error("eval_permittivity: omega must be > 0");
  const Complex den(1.0 - omega * omega, -omega * medium.gamma);
  return 1.0 + medium.omega_p * medium.omega_p / den;
}

struct BandEdges {
  double lower;  ///< transverse edge, identically 1 in these units
  double upper;  ///< longitudinal edge sqrt(1 + omega_p^2)
};

inline BandEdges band_edges(const LorentzMedium& medium) {
  return {1.0, std::sqrt(1.0 + medium.omega_p * medium.omega_p)};
}

/// Gap membership uses the loss-free analytic edges (1, sqrt(1+omega_p^2)),
/// both edges excluded. This is the convention the band-edge quotes in the
/// module contract use, not the finite-gamma Re eps < 0 test.
inline bool in_band_gap(const LorentzMedium& medium, double omega) {
  if (!(omega > 0.0)) throw std::domain_error("in_band_gap: omega must be > 0");
  return omega > 1.0 && omega < band_edges(medium).upper;
}

/// Frequency where Re eps crosses -1 in the loss-free limit; the surface
/// response |eps+1|^-2 peaks here. Used as a quadrature refinement hint.
inline double surface_mode_frequency(const LorentzMedium& medium) {
  return std::sqrt(1.0 + 0.5 * medium.omega_p * medium.omega_p);
}

/// Residual of the Kramers-Kronig relation
///   eps_R(omega) - 1 = (2/pi) PV int_0^inf w' eps_I(w') / (w'^2 - omega^2) dw'
/// evaluated with the module's principal-value quadrature. A small residual
/// certifies causality of the model numerically. The upper cutoff error is
/// folded into the returned error estimate via the analytic w^-3 tail bound.
inline quad::Result kramers_kronig_residual(const LorentzMedium& medium,
                                            double omega,
                                            const quad::Settings& settings = {}) {
  if (!(omega > 0.0))
    throw std::domain_error("kramers_kronig_residual: omega must be > 0");
  medium.validate();

  const double cutoff = 1e3;
  const auto numerator = [&](double w) {
    return w * eval_permittivity(medium, w).imag() / (w + omega);
  };
  const std::vector<double> features = {1.0, band_edges(medium).upper};
  quad::Result pv = quad::principal_value(numerator, omega, 1e-12, cutoff,
                                          features, medium.gamma, settings);

  // Tail: eps_I ~ omega_p^2 gamma / w^3, so the integrand ~ wp^2 g / w^4.
  const double tail = medium.omega_p * medium.omega_p * medium.gamma /
                      (3.0 * cutoff * cutoff * cutoff);

  const double eps_r = eval_permittivity(medium, omega).real();
  quad::Result out;
  out.value = std::abs(eps_r - 1.0 - (2.0 / kPi) * pv.value);
  out.error_estimate = (2.0 / kPi) * (pv.error_estimate + tail);
  out.converged = pv.converged;
  return out;
}

}  // namespace atomphase
