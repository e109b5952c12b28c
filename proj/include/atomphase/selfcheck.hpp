#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "atomphase/berry_phase.hpp"
#include "atomphase/dynamics.hpp"
#include "atomphase/permittivity.hpp"
#include "atomphase/surface_response.hpp"

namespace atomphase {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Fast battery of module invariants, used by `atomphase check`.
inline std::vector<CheckResult> run_self_checks() {
  std::vector<CheckResult> results;
  const auto record = [&](const std::string& name, bool ok,
                          const std::string& detail = {}) {
    results.push_back({name, ok, detail});
  };

  // absorption positivity and high-frequency transparency
  {
    const LorentzMedium medium{0.5, 1e-3};
    bool positive = true;
    for (int i = 0; i <= 120; ++i) {
      const double w = std::pow(10.0, -3.0 + 6.0 * i / 120.0);
      positive = positive && eval_permittivity(medium, w).imag() > 0.0;
    }
    record("permittivity: Im eps > 0 on log grid", positive);
    const double tail = std::abs(eval_permittivity(medium, 1e3) - 1.0);
    record("permittivity: eps -> 1 at high frequency",
           tail < 1e-5 * medium.omega_p * medium.omega_p);
  }

  // z^-3 scaling and orientation linearity of the surface response
  {
    AtomSurfaceConfig cfg;
    cfg.medium = {0.5, 1e-2};
    bool scaling = true, orientation = true;
    for (double z : {0.02, 0.05, 0.2}) {
      cfg.z_atom = z;
      const SurfaceResponse a = surface_response(cfg);
      cfg.z_atom = 2.0 * z;
      const SurfaceResponse b = surface_response(cfg);
      scaling = scaling &&
                std::abs(8.0 * b.gamma_ratio - a.gamma_ratio) <=
                    1e-12 * std::abs(a.gamma_ratio) &&
                std::abs(8.0 * b.shift_ratio - a.shift_ratio) <=
                    1e-12 * std::abs(a.shift_ratio);
    }
    cfg.z_atom = 0.05;
    cfg.orientation.dz_over_d_sq = 0.0;
    const double base = decay_rate_halfspace(cfg);
    for (double s : {0.5, 1.0}) {
      cfg.orientation.dz_over_d_sq = s;
      orientation = orientation &&
                    std::abs(decay_rate_halfspace(cfg) - (1.0 + s) * base) <=
                        1e-12 * base;
    }
    record("surface response: exact z^-3 scaling", scaling);
    record("surface response: orientation linearity", orientation);
  }

  // Vieta identities for produced root pairs
  {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    bool vieta = true;
    for (int k = 0; k < 50; ++k) {
      const double varpi = uni(rng);
      const double shift = 8.0 * uni(rng) - 4.0;
      const DriveParams drive{3.0 * uni(rng), 4.0 * uni(rng) - 2.0, 0.0};
      const Complex g(varpi, -shift);
      const CharacteristicRoots roots = characteristic_roots(g, drive);
      const Complex sum_expect = -(g + Complex(0.0, drive.detuning));
      const Complex prod_expect =
          0.25 * drive.rabi * drive.rabi + Complex(0.0, drive.detuning) * g;
      vieta = vieta &&
              std::abs(roots.r1 + roots.r2 - sum_expect) < 1e-12 * (1.0 + std::abs(sum_expect)) &&
              std::abs(roots.r1 * roots.r2 - prod_expect) < 1e-12 * (1.0 + std::abs(prod_expect));
    }
    record("dynamics: Vieta identities for root pairs", vieta);
  }

  // norm monotonicity along a sample trajectory
  {
    const InitialState ic{{0.6, 0.1}, {0.5, -0.3}};
    const DriveParams drive{1.3, 0.4, 0.9};
    double prev = ic.norm_sq();
    bool monotone = true;
    for (int i = 1; i <= 400; ++i) {
      const double t = 10.0 * i / 400.0;
      const AmplitudePair a = evolve_markov(t, ic, Complex(0.35, -1.1), drive);
      const double n = std::norm(a.c1) + std::norm(a.c2);
      monotone = monotone && n <= prev + 1e-10;
      prev = n;
    }
    record("dynamics: norm non-increasing", monotone);
  }

  // phase conventions agree for X > 0 and satisfy the sine identity
  {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    bool sine = true, agree = true;
    for (int k = 0; k < 200; ++k) {
      const double x = uni(rng), y = uni(rng);
      const PhasePoint p = phase_point(x, y);
      if (!p.defined) continue;
      const double mag = std::hypot(x, y);
      sine = sine && std::abs(std::sin(p.phi_arcsin) * mag + y) < 1e-12 &&
             std::abs(std::sin(p.phi_atan2) * mag + y) < 1e-12;
      if (x > 0.0) agree = agree && std::abs(p.phi_arcsin - p.phi_atan2) < 1e-12;
    }
    record("phase: sine identity in both conventions", sine);
    record("phase: conventions agree for X > 0", agree);
  }

  // vanishing-phase configuration
  {
    const InitialState ic{{1.0, 0.0}, {0.0, 0.0}};
    const DriveParams drive{1.0, 0.0, 0.7};
    bool zero = true;
    for (int i = 0; i <= 500; ++i) {
      const double t = 10.0 * i / 500.0;
      const AmplitudePair a = amplitudes_free(t, ic, 1.0, drive);
      const auto [x, y] = overlap_xy(ic, a, 50.0 * t);
      const PhasePoint p = phase_point(x, y);
      zero = zero && std::abs(y) < 1e-12 &&
             (!p.defined || std::abs(p.phi_arcsin) < 1e-12);
    }
    record("phase: vanishes for empty upper level in free space", zero);
  }

  return results;
}

}  // namespace atomphase
