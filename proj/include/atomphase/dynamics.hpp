#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "atomphase/common.hpp"
#include "atomphase/ode.hpp"

namespace atomphase {

/// Classical pump parameters in Gamma0 units.
struct DriveParams {
  double rabi = 0.0;      ///< Omega >= 0
  double detuning = 0.0;  ///< Delta = omega_pump - omega0, signed
  double phase = 0.0;     ///< pump phase theta, radians

  void validate() const {
    if (!(rabi >= 0.0)) throw ConfigError("drive.rabi must be >= 0");
  }
};

/// Amplitudes of the two pumped levels at t = 0; the field continuum
/// starts empty, so |C1|^2 + |C2|^2 <= 1.
struct InitialState {
  Complex c1{1.0, 0.0};
  Complex c2{0.0, 0.0};

  double norm_sq() const { return std::norm(c1) + std::norm(c2); }

  void validate() const {
    if (norm_sq() > 1.0 + 1e-12)
      throw ConfigError("initial state norm exceeds 1");
  }
};

struct AmplitudePair {
  Complex c1;
  Complex c2;
  double t;  ///< time in Gamma0^-1 units
};

struct CharacteristicRoots {
  Complex r1;  ///< sorted by (Re, Im), r1 <= r2
  Complex r2;
  bool degenerate;
};

namespace detail {
inline constexpr double kDegeneracyTol = 1e-9;
}

/// Roots of s^2 + (g + i*Delta) s + (Omega^2/4 + i*g*Delta) = 0 where g is
/// the (possibly complex) effective decay constant of the C2 amplitude.
/// Both square-root signs are taken, so the root set is branch independent;
/// roots are sorted lexicographically by (Re, Im) for determinism. The
/// degenerate flag is set when |r1 - r2| < 1e-9 * max(|r1|, |r2|, 1).
inline CharacteristicRoots characteristic_roots(Complex decay,
                                                const DriveParams& drive) {
  const Complex b = decay + Complex(0.0, drive.detuning);
  const Complex half_diff = 0.5 * (decay - Complex(0.0, drive.detuning));
  const Complex sq =
      std::sqrt(half_diff * half_diff - 0.25 * drive.rabi * drive.rabi);
  Complex r1 = -0.5 * b + sq;
  Complex r2 = -0.5 * b - sq;
  if (r1.real() > r2.real() ||
      (r1.real() == r2.real() && r1.imag() > r2.imag()))
    std::swap(r1, r2);
  const double scale = std::max({std::abs(r1), std::abs(r2), 1.0});
  return {r1, r2, std::abs(r1 - r2) < detail::kDegeneracyTol * scale};
}

/// Free-space roots; gamma0 is the amplitude decay constant of C2.
inline CharacteristicRoots roots_free(double gamma0, const DriveParams& drive) {
  if (!(gamma0 > 0.0)) throw std::domain_error("roots_free: gamma0 must be > 0");
  return characteristic_roots(Complex(gamma0, 0.0), drive);
}

/// Roots near the surface: the effective decay is varpi - i*delta_omega0
/// with varpi = Gamma/2 >= 0 the half decay rate and delta_omega0 the shift.
inline CharacteristicRoots roots_dielectric(double varpi, double line_shift,
                                            const DriveParams& drive) {
  if (!(varpi >= 0.0))
    throw std::domain_error("roots_dielectric: varpi must be >= 0");
  return characteristic_roots(Complex(varpi, -line_shift), drive);
}

/// Closed-form amplitudes from the Laplace inversion with effective decay g.
/// Simple roots use the two-pole residue form; within the degeneracy
/// tolerance the confluent (double-pole) form is evaluated instead, which is
/// the correct limit of the residue form. C1 is returned with the
/// e^{i*Delta*t} rotation already applied.
inline AmplitudePair evolve_markov(double t, const InitialState& ic,
                                   Complex decay, const DriveParams& drive) {
  if (t == 0.0) return {ic.c1, ic.c2, 0.0};
  const Complex i_unit(0.0, 1.0);
  const Complex pump2 =
      0.5 * i_unit * drive.rabi * std::polar(1.0, -drive.phase) * ic.c1;
  const Complex pump1 =
      0.5 * i_unit * drive.rabi * std::polar(1.0, drive.phase) * ic.c2;
  const Complex rot = std::exp(Complex(0.0, drive.detuning * t));
  const CharacteristicRoots roots = characteristic_roots(decay, drive);

  Complex c1, c2;
  if (roots.degenerate) {
    const Complex x = 0.5 * (roots.r1 + roots.r2);
    const Complex ex = std::exp(x * t);
    c2 = ex * (ic.c2 + t * ((x + Complex(0.0, drive.detuning)) * ic.c2 + pump2));
    c1 = rot * ex * (ic.c1 + t * ((x + decay) * ic.c1 + pump1));
  } else {
    const Complex inv = 1.0 / (roots.r1 - roots.r2);
    const Complex e1 = std::exp(roots.r1 * t);
    const Complex e2 = std::exp(roots.r2 * t);
    c2 = inv * (e1 * ((roots.r1 + Complex(0.0, drive.detuning)) * ic.c2 + pump2) -
                e2 * ((roots.r2 + Complex(0.0, drive.detuning)) * ic.c2 + pump2));
    c1 = rot * inv * (e1 * ((roots.r1 + decay) * ic.c1 + pump1) -
                      e2 * ((roots.r2 + decay) * ic.c1 + pump1));
  }
  return {c1, c2, t};
}

inline AmplitudePair amplitudes_free(double t, const InitialState& ic,
                                     double gamma0, const DriveParams& drive) {
  if (!(t >= 0.0)) throw std::domain_error("amplitudes_free: t must be >= 0");
  if (!(gamma0 > 0.0))
    throw std::domain_error("amplitudes_free: gamma0 must be > 0");
  return evolve_markov(t, ic, Complex(gamma0, 0.0), drive);
}

inline AmplitudePair amplitudes_dielectric(double t, const InitialState& ic,
                                           double varpi, double line_shift,
                                           const DriveParams& drive) {
  if (!(t >= 0.0))
    throw std::domain_error("amplitudes_dielectric: t must be >= 0");
  if (!(varpi >= 0.0))
    throw std::domain_error("amplitudes_dielectric: varpi must be >= 0");
  return evolve_markov(t, ic, Complex(varpi, -line_shift), drive);
}

/// Sampled amplitude history on a time grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<Complex> c1;
  std::vector<Complex> c2;
};

/// Direct adaptive integration of the coupled amplitude equations
///   dC1/dt = (i Omega/2) e^{+i theta} e^{+i Delta t} C2
///   dC2/dt = (i Omega/2) e^{-i theta} e^{-i Delta t} C1 + kernel * C2
/// with the constant Markov kernel (free space: kernel = -Gamma0). Serves as
/// the independent cross-check of the closed forms. Deterministic for fixed
/// settings; every grid point is hit by an exact integration step.
inline Trajectory integrate_markov_ode(const InitialState& ic, Complex kernel,
                                       const DriveParams& drive,
                                       std::span<const double> tgrid,
                                       const ode::Settings& settings = {}) {
  for (std::size_t i = 0; i + 1 < tgrid.size(); ++i)
    if (!(tgrid[i + 1] > tgrid[i]))
      throw std::domain_error("integrate_markov_ode: tgrid must be increasing");
  if (!tgrid.empty() && tgrid.front() != 0.0)
    throw std::domain_error("integrate_markov_ode: tgrid must start at 0");

  const Complex i_unit(0.0, 1.0);
  const Complex f1 = 0.5 * i_unit * drive.rabi * std::polar(1.0, drive.phase);
  const Complex f2 = 0.5 * i_unit * drive.rabi * std::polar(1.0, -drive.phase);
  const auto rhs = [&](double t, const ode::State& y, ode::State& dydt) {
    const Complex rot = std::exp(Complex(0.0, drive.detuning * t));
    dydt[0] = f1 * rot * y[1];
    dydt[1] = f2 * std::conj(rot) * y[0] + kernel * y[1];
  };

  Trajectory out;
  out.times.assign(tgrid.begin(), tgrid.end());
  out.c1.reserve(tgrid.size());
  out.c2.reserve(tgrid.size());
  ode::State y{ic.c1, ic.c2};
  double t = 0.0;
  for (double target : tgrid) {
    if (target > t) {
      ode::integrate_to(rhs, y, t, target, settings);
      t = target;
    }
    out.c1.push_back(y[0]);
    out.c2.push_back(y[1]);
  }
  return out;
}

}  // namespace atomphase
