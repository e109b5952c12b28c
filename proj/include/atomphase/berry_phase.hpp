#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "atomphase/common.hpp"
#include "atomphase/dynamics.hpp"
#include "atomphase/surface_response.hpp"
#include "atomphase/volterra.hpp"

namespace atomphase {

enum class PhaseConvention { arcsin, atan2 };
enum class SolverKind { closed, oracle, volterra };

/// Overlap components and total phase at one instant. Both conventions
/// satisfy sin(phi) = -y / sqrt(x^2 + y^2); the arcsin form folds the phase
/// into [-pi/2, pi/2] while the atan2 form keeps the quadrant, in (-pi, pi].
/// `defined` is false when the overlap magnitude underflows.
struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
  double phi_arcsin = 0.0;
  double phi_atan2 = 0.0;
  bool defined = false;
};

/// (X, Y) = (Re, Im) of C1*(0) C1(t) + C2*(0) C2(t) e^{-i omega0 t}.
/// omega0_t is the accumulated optical phase (omega0/Gamma0) * (Gamma0 t).
inline std::pair<double, double> overlap_xy(const InitialState& ic,
                                            const AmplitudePair& amps,
                                            double omega0_t) {
  const Complex overlap = std::conj(ic.c1) * amps.c1 +
                          std::conj(ic.c2) * amps.c2 *
                              std::exp(Complex(0.0, -omega0_t));
  return {overlap.real(), overlap.imag()};
}

inline PhasePoint phase_point(double x, double y) {
  PhasePoint p;
  p.x = x;
  p.y = y;
  const double mag = std::hypot(x, y);
  if (!(mag > 1e-30)) return p;  // defined stays false
  p.defined = true;
  p.phi_arcsin = -std::asin(y / mag) + 0.0;  // normalize -0
  p.phi_atan2 = -std::atan2(y, x) + 0.0;
  if (p.phi_atan2 <= -kPi) p.phi_atan2 += 2.0 * kPi;
  return p;
}

inline double phase_value(const PhasePoint& p, PhaseConvention convention) {
  return convention == PhaseConvention::arcsin ? p.phi_arcsin : p.phi_atan2;
}

/// Total phase in the requested convention. An underflowed overlap yields
/// NaN (the undefined marker used throughout the datasets), not an
/// exception.
inline double total_phase(double x, double y, PhaseConvention convention) {
  const PhasePoint p = phase_point(x, y);
  return p.defined ? phase_value(p, convention)
                   : std::numeric_limits<double>::quiet_NaN();
}

/// Time series of overlap components, phases and level populations.
struct PhaseTrace {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::vector<std::array<double, 2>> populations;  ///< {|C1|^2, |C2|^2}
};

struct TraceOptions {
  bool include_shift = true;     ///< let delta_omega0 act on the dynamics
  ode::Settings ode{};
  VolterraSettings volterra{};
};

namespace detail {

inline void check_tgrid(std::span<const double> tgrid) {
  if (tgrid.empty() || tgrid.front() != 0.0)
    throw ConfigError("phase trace time grid must start at 0");
  for (std::size_t i = 0; i + 1 < tgrid.size(); ++i)
    if (!(tgrid[i + 1] > tgrid[i]))
      throw ConfigError("phase trace time grid must be increasing");
}

inline PhaseTrace assemble_trace(const InitialState& ic,
                                 const Trajectory& traj,
                                 double omega0_over_gamma0) {
  PhaseTrace trace;
  trace.times = traj.times;
  trace.points.reserve(traj.times.size());
  trace.populations.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const AmplitudePair amps{traj.c1[i], traj.c2[i], traj.times[i]};
    const auto [x, y] =
        overlap_xy(ic, amps, omega0_over_gamma0 * traj.times[i]);
    trace.points.push_back(phase_point(x, y));
    trace.populations.push_back({std::norm(amps.c1), std::norm(amps.c2)});
  }
  return trace;
}

}  // namespace detail

/// Trace for a fixed complex decay constant (free space: decay = Gamma0).
/// solver == volterra is not meaningful here and is rejected.
inline PhaseTrace phase_trace_markov(const InitialState& ic, Complex decay,
                                     double omega0_over_gamma0,
                                     const DriveParams& drive,
                                     SolverKind solver,
                                     std::span<const double> tgrid,
                                     const TraceOptions& opts = {}) {
  detail::check_tgrid(tgrid);
  ic.validate();
  drive.validate();
  Trajectory traj;
  if (solver == SolverKind::oracle) {
    traj = integrate_markov_ode(ic, -decay, drive, tgrid, opts.ode);
  } else if (solver == SolverKind::closed) {
    traj.times.assign(tgrid.begin(), tgrid.end());
    for (double t : tgrid) {
      const AmplitudePair a = evolve_markov(t, ic, decay, drive);
      traj.c1.push_back(a.c1);
      traj.c2.push_back(a.c2);
    }
  } else {
    throw ConfigError("volterra solver requires a spectral density; "
                      "use the surface-configured phase_trace");
  }
  return detail::assemble_trace(ic, traj, omega0_over_gamma0);
}

/// Reflection spectral density of the configured surface in Gamma0 units,
/// for the non-Markovian solver. Frequencies map as omega = nu * omega0 /
/// (omega0_over_gamma0) in omega_T units; support is cut at 20 omega_T.
inline SpectralDensity surface_spectral_density(const AtomSurfaceConfig& cfg) {
  cfg.validate();
  const double nu0 = cfg.omega0_over_gamma0;
  const double omega_per_nu = cfg.omega0 / nu0;
  const double pref = 0.375 * detail::near_field_prefactor(cfg);
  const bool total = cfg.total_rate;
  const LorentzMedium medium = cfg.medium;
  SpectralDensity density;
  density.nu0 = nu0;
  density.nu_max = 20.0 / omega_per_nu;
  density.j = [=](double nu) {
    const double omega = nu * omega_per_nu;
    if (!(omega > 0.0)) return 0.0;
    const Complex eps = eval_permittivity(medium, omega);
    double j = pref * eps.imag() / std::norm(eps + 1.0) / (2.0 * kPi);
    if (total) {
      const double rel = nu / nu0;
      j += rel * rel * rel / (2.0 * kPi);
    }
    return j;
  };
  return density;
}

/// Trace near the surface: the Markov coefficients (and, for the volterra
/// solver, the spectral density) are derived from cfg.
inline PhaseTrace phase_trace(const InitialState& ic,
                              const AtomSurfaceConfig& cfg,
                              const DriveParams& drive, SolverKind solver,
                              std::span<const double> tgrid,
                              const TraceOptions& opts = {}) {
  detail::check_tgrid(tgrid);
  const SurfaceResponse response = surface_response(cfg);
  const Complex decay(0.5 * response.gamma_ratio,
                      opts.include_shift ? -response.shift_ratio : 0.0);
  if (solver != SolverKind::volterra)
    return phase_trace_markov(ic, decay, cfg.omega0_over_gamma0, drive, solver,
                              tgrid, opts);

  // volterra needs a uniform grid
  const double h = tgrid.size() > 1 ? tgrid[1] - tgrid[0] : 0.0;
  for (std::size_t i = 0; i + 1 < tgrid.size(); ++i)
    if (std::abs((tgrid[i + 1] - tgrid[i]) - h) > 1e-9 * std::max(h, 1.0))
      throw ConfigError("volterra solver requires a uniform time grid");
  ic.validate();
  drive.validate();
  const UniformGrid grid{tgrid.back(), static_cast<int>(tgrid.size()) - 1};
  const Trajectory traj = volterra_solve(ic, surface_spectral_density(cfg),
                                         drive, grid, opts.volterra);
  return detail::assemble_trace(ic, traj, cfg.omega0_over_gamma0);
}

}  // namespace atomphase
