#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "atomphase/common.hpp"
#include "atomphase/dynamics.hpp"
#include "atomphase/quadrature.hpp"

namespace atomphase {

/// Spectral density J(nu) of the atom-field coupling, nu in Gamma0 units.
/// Normalization: the Markov limit of the induced kernel is
/// -pi*J(nu0) + i * PV int J(nu)/(nu - nu0) dnu, i.e. Gamma = 2*pi*J(nu0).
struct SpectralDensity {
  std::function<double(double)> j;  ///< J(nu) >= 0 on (0, nu_max]
  double nu0;                       ///< transition frequency in Gamma0 units
  double nu_max;                    ///< support cutoff in Gamma0 units
};

struct UniformGrid {
  double t_end;
  int steps;  ///< number of intervals; grid has steps+1 points

  double h() const { return t_end / steps; }

  void validate() const {
    if (!(t_end > 0.0) || steps < 1)
      throw ConfigError("uniform grid requires t_end > 0 and steps >= 1");
  }
};

struct VolterraSettings {
  int max_fixed_point_iters = 50;
  double fixed_point_tol = 1e-13;
  double kernel_cycles_per_panel = 8.0;  ///< oscillation budget per GL panel
};

/// Memory kernel at lag tau from the spectral density,
///   K(tau) = int_0^numax J(nu) (e^{-i(nu-nu0)tau} - 1) / (i(nu-nu0)) dnu.
/// The integrand is written as -tau * sinc(x tau/2) e^{-i x tau/2} which is
/// regular at nu = nu0; panels are sized so each holds a bounded number of
/// oscillation cycles of the phase factor.
inline std::vector<Complex> tabulate_memory_kernel(
    const SpectralDensity& density, double h, int steps,
    const VolterraSettings& settings = {}) {
  std::vector<Complex> kernel(static_cast<std::size_t>(steps) + 1);
  kernel[0] = Complex(0.0, 0.0);
  const double lo = 1e-12, hi = density.nu_max;
  for (int n = 1; n <= steps; ++n) {
    const double tau = n * h;
    const double cycles = (hi - lo) * tau / (2.0 * kPi);
    const int panels = std::max(
        64, static_cast<int>(std::ceil(cycles / settings.kernel_cycles_per_panel)));
    const double dw = (hi - lo) / panels;
    Complex acc(0.0, 0.0);
    const auto re_part = [&](double nu) {
      const double x = nu - density.nu0;
      const double u = 0.5 * x * tau;
      const double sinc = std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
      return -tau * density.j(nu) * sinc * std::cos(u);
    };
    const auto im_part = [&](double nu) {
      const double x = nu - density.nu0;
      const double u = 0.5 * x * tau;
      const double sinc = std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
      return tau * density.j(nu) * sinc * std::sin(u);
    };
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * dw, b = lo + (p + 1) * dw;
      acc += Complex(quad::detail::gauss20(re_part, a, b),
                     quad::detail::gauss20(im_part, a, b));
    }
    kernel[n] = acc;
  }
  return kernel;
}

namespace detail {

// Trapezoidal product integration of the coupled Volterra system
//   C1(t) = C1(0) + f1 int_0^t e^{+i D t'} C2 dt'
//   C2(t) = C2(0) + f2 int_0^t e^{-i D t'} C1 dt' + int_0^t K(t-t') C2 dt'
// with per-step fixed-point correction of the implicit endpoint terms.
inline Trajectory volterra_product_integration(
    const InitialState& ic, const std::vector<Complex>& kernel,
    const DriveParams& drive, double h, int steps,
    const VolterraSettings& settings) {
  const Complex i_unit(0.0, 1.0);
  const Complex f1 = 0.5 * i_unit * drive.rabi * std::polar(1.0, drive.phase);
  const Complex f2 = 0.5 * i_unit * drive.rabi * std::polar(1.0, -drive.phase);

  const std::size_t n_points = static_cast<std::size_t>(steps) + 1;
  std::vector<Complex> rot(n_points);
  for (std::size_t m = 0; m < n_points; ++m)
    rot[m] = std::exp(Complex(0.0, drive.detuning * (h * m)));

  Trajectory out;
  out.times.resize(n_points);
  out.c1.resize(n_points);
  out.c2.resize(n_points);
  out.times[0] = 0.0;
  out.c1[0] = ic.c1;
  out.c2[0] = ic.c2;

  for (int n = 1; n <= steps; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    out.times[un] = h * n;
    // interior sums (trapezoid weights: h/2 at m=0, h elsewhere, endpoint
    // m=n handled implicitly below)
    Complex s1 = 0.5 * h * rot[0] * out.c2[0];
    Complex s2 = 0.5 * h * std::conj(rot[0]) * out.c1[0];
    Complex sk = 0.5 * h * kernel[un] * out.c2[0];
    for (std::size_t m = 1; m < un; ++m) {
      s1 += h * rot[m] * out.c2[m];
      s2 += h * std::conj(rot[m]) * out.c1[m];
      sk += h * kernel[un - m] * out.c2[m];
    }

    Complex c1 = out.c1[un - 1];
    Complex c2 = out.c2[un - 1];
    bool settled = false;
    for (int it = 0; it < settings.max_fixed_point_iters; ++it) {
      const Complex c1_next =
          ic.c1 + f1 * (s1 + 0.5 * h * rot[un] * c2);
      const Complex c2_next = ic.c2 +
                              f2 * (s2 + 0.5 * h * std::conj(rot[un]) * c1) +
                              sk + 0.5 * h * kernel[0] * c2;
      const double delta = std::abs(c1_next - c1) + std::abs(c2_next - c2);
      c1 = c1_next;
      c2 = c2_next;
      if (delta < settings.fixed_point_tol * (1.0 + std::abs(c1) + std::abs(c2))) {
        settled = true;
        break;
      }
    }
    if (!settled)
      throw NumericalError("volterra: fixed point did not settle at step " +
                           std::to_string(n));
    out.c1[un] = c1;
    out.c2[un] = c2;
  }
  return out;
}

}  // namespace detail

/// Non-Markovian evolution: the memory kernel is built from the spectral
/// density by frequency quadrature once per run, then the Volterra system is
/// solved by trapezoidal product integration (second order in the step).
inline Trajectory volterra_solve(const InitialState& ic,
                                 const SpectralDensity& density,
                                 const DriveParams& drive,
                                 const UniformGrid& grid,
                                 const VolterraSettings& settings = {}) {
  grid.validate();
  ic.validate();
  drive.validate();
  const std::vector<Complex> kernel =
      tabulate_memory_kernel(density, grid.h(), grid.steps, settings);
  return detail::volterra_product_integration(ic, kernel, drive, grid.h(),
                                              grid.steps, settings);
}

/// Same solver run on a constant (memoryless) kernel K(tau) = kernel_const.
/// The exact solution of that problem is the Markov closed form, which makes
/// this entry point the reference for step-convergence studies.
inline Trajectory volterra_solve_markov(const InitialState& ic,
                                        Complex kernel_const,
                                        const DriveParams& drive,
                                        const UniformGrid& grid,
                                        const VolterraSettings& settings = {}) {
  grid.validate();
  ic.validate();
  drive.validate();
  const std::vector<Complex> kernel(static_cast<std::size_t>(grid.steps) + 1,
                                    kernel_const);
  return detail::volterra_product_integration(ic, kernel, drive, grid.h(),
                                              grid.steps, settings);
}

}  // namespace atomphase
