#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "atomphase/permittivity.hpp"

using atomphase::BandEdges;
using atomphase::Complex;
using atomphase::LorentzMedium;
using atomphase::eval_permittivity;
using atomphase::kramers_kronig_residual;
using atomphase::band_edges;

TEST_CASE("static and resonant limits") {
  const LorentzMedium medium{0.5, 1e-4};
  const Complex low = eval_permittivity(medium, 1e-9);
  CHECK(std::abs(low - Complex(1.25, 0.0)) < 1e-9);

  // exactly on resonance the real denominator vanishes
  const Complex res = eval_permittivity(medium, 1.0);
  CHECK(res.real() == Catch::Approx(1.0).margin(1e-9));
  CHECK(res.imag() == Catch::Approx(2500.0).epsilon(1e-12));
}

TEST_CASE("exact-rational oracle at omega = 21/20") {
  // eps = 1 + (1/4) / (-41/400 - (21/2000) i) = 1 + 500 (-205 + 21 i) / 42466
  const double re_expect = 1.0 - 102500.0 / 42466.0;
  const double im_expect = 10500.0 / 42466.0;
  const Complex eps = eval_permittivity({0.5, 1e-2}, 1.05);
  CHECK(std::abs(eps.real() - re_expect) < 1e-12);
  CHECK(std::abs(eps.imag() - im_expect) < 1e-12);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(eval_permittivity({0.5, 1e-3}, 0.0), std::domain_error);
  CHECK_THROWS_AS(eval_permittivity({0.5, 1e-3}, -1.0), std::domain_error);
  CHECK_THROWS_AS(atomphase::in_band_gap({0.5, 1e-3}, 0.0), std::domain_error);
  LorentzMedium bad{-1.0, 1e-3};
  CHECK_THROWS_AS(bad.validate(), atomphase::ConfigError);
}

TEST_CASE("band edges") {
  const BandEdges edges = band_edges(LorentzMedium{0.5, 1e-4});
  CHECK(edges.lower == 1.0);
  CHECK(edges.upper == Catch::Approx(1.1180339887498949).epsilon(1e-14));
  CHECK(band_edges(LorentzMedium{0.0, 1e-4}).upper == 1.0);
  CHECK(band_edges(LorentzMedium{1.0, 1e-4}).upper ==
        Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("band gap membership uses open analytic edges") {
  const LorentzMedium medium{0.5, 1e-4};
  CHECK(atomphase::in_band_gap(medium, 1.05));
  CHECK_FALSE(atomphase::in_band_gap(medium, 0.9));
  CHECK_FALSE(atomphase::in_band_gap(medium, 1.0));
  CHECK_FALSE(atomphase::in_band_gap(medium, 1.118034));
  CHECK_FALSE(atomphase::in_band_gap(medium, band_edges(medium).upper));
}

TEST_CASE("absorption positive, transparent at high frequency") {
  const LorentzMedium medium{0.5, 1e-3};
  for (int i = 0; i <= 200; ++i) {
    const double w = std::pow(10.0, -3.0 + 6.0 * i / 200.0);
    CHECK(eval_permittivity(medium, w).imag() > 0.0);
  }
  CHECK(std::abs(eval_permittivity(medium, 1e3) - 1.0) <
        1e-5 * medium.omega_p * medium.omega_p);
}

TEST_CASE("Re eps turns negative inside the gap for small damping") {
  for (double gamma : {1e-4, 1e-3, 1e-2}) {
    const LorentzMedium medium{0.5, gamma};
    const BandEdges edges = band_edges(medium);
    bool found_negative = false;
    for (int i = 1; i < 400; ++i) {
      const double w =
          edges.lower + (edges.upper - edges.lower) * i / 400.0;
      if (eval_permittivity(medium, w).real() < 0.0) found_negative = true;
    }
    CHECK(found_negative);
  }
}

TEST_CASE("evaluation is pure and bit-stable") {
  const LorentzMedium medium{0.7, 3e-3};
  const Complex a = eval_permittivity(medium, 1.2345);
  const Complex b = eval_permittivity(medium, 1.2345);
  CHECK(a.real() == b.real());
  CHECK(a.imag() == b.imag());
}

TEST_CASE("Kramers-Kronig residual is small off resonance") {
  const auto r1 = kramers_kronig_residual({0.5, 1e-2}, 0.5);
  CHECK(r1.converged);
  CHECK(r1.value < 1e-3);

  const auto r2 = kramers_kronig_residual({0.5, 1e-1}, 1.3);
  CHECK(r2.converged);
  CHECK(r2.value < 1e-3);

  // vanishing coupling: the relation is 0 = 0
  const auto r3 = kramers_kronig_residual({1e-8, 1e-2}, 0.5);
  CHECK(r3.value < 1e-10);
}
