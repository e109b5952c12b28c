#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "atomphase/common.hpp"

namespace atomphase::quad {

struct Settings {
  double abs_tol = 1e-9;  ///< target absolute error for the whole integral
  int max_depth = 26;     ///< bisection depth cap per initial panel
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

namespace detail {

// Gauss-Legendre nodes/weights, positive half (symmetric rules).
inline constexpr std::array<double, 5> kNodes10 = {
    0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
    0.8650633666889845, 0.9739065285171717};
inline constexpr std::array<double, 5> kWeights10 = {
    0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};
inline constexpr std::array<double, 10> kNodes20 = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
    0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
    0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
    0.9931285991850949};
inline constexpr std::array<double, 10> kWeights20 = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
    0.0176140071391521};

template <class F>
double gauss10(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kNodes10.size(); ++i)
    s += kWeights10[i] * (f(c + r * kNodes10[i]) + f(c - r * kNodes10[i]));
  return r * s;
}

template <class F>
double gauss20(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kNodes20.size(); ++i)
    s += kWeights20[i] * (f(c + r * kNodes20[i]) + f(c - r * kNodes20[i]));
  return r * s;
}

template <class F>
void refine(F&& f, double a, double b, double tol_per_len, int depth,
            int max_depth, Result& out) {
  const double v20 = gauss20(f, a, b);
  const double v10 = gauss10(f, a, b);
  const double err = std::abs(v20 - v10);
  if (err <= tol_per_len * (b - a) || depth >= max_depth) {
    out.value += v20;
    out.error_estimate += err;
    if (err > tol_per_len * (b - a)) out.converged = false;
    return;
  }
  const double m = 0.5 * (a + b);
  refine(f, a, m, tol_per_len, depth + 1, max_depth, out);
  refine(f, m, b, tol_per_len, depth + 1, max_depth, out);
}

}  // namespace detail

/// Adaptive Gauss integration of f over consecutive panels given by sorted
/// breakpoints. Deterministic: the refinement order depends only on inputs.
template <class F>
Result integrate(F&& f, const std::vector<double>& breaks,
                 const Settings& settings = {}) {
  Result out;
  if (breaks.size() < 2) return out;
  const double total = breaks.back() - breaks.front();
  if (!(total > 0.0)) return out;
  const double tol_per_len = settings.abs_tol / total;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] > breaks[i])
      detail::refine(f, breaks[i], breaks[i + 1], tol_per_len, 0,
                     settings.max_depth, out);
  }
  return out;
}

/// Principal value of int_a^b f(x) / (x - pole) dx for smooth f.
///
/// The pole is handled on a symmetric window [pole-h, pole+h] where the pair
/// sum reduces to the regular integrand (f(pole+u) - f(pole-u)) / u; outside
/// the window plain adaptive panels are used, with `features` (sharp spots of
/// f, e.g. a medium resonance) inserted as initial breakpoints. Throws
/// NumericalError if the pole sits too close to a feature for a symmetric
/// window to exist.
template <class F>
Result principal_value(F&& f, double pole, double a, double b,
                       const std::vector<double>& features,
                       double feature_scale, const Settings& settings = {}) {
  if (!(pole > a && pole < b))
    throw NumericalError("principal_value: pole outside integration domain");

  double h = std::min({pole - a, b - pole, 0.5});
  for (double c : features) {
    const double d = std::abs(c - pole);
    if (d > 0.0) h = std::min(h, 0.5 * d);
  }
  if (h < 64.0 * feature_scale * 1e-6 || h < 1e-10)
    throw NumericalError(
        "principal_value: pole within resolution distance of an integrand "
        "feature; refine manually");

  Result out;

  const auto pair_sum = [&](double u) {
    return (f(pole + u) - f(pole - u)) / u;
  };
  const Result inner = integrate(pair_sum, {0.0, h}, settings);
  out.value += inner.value;
  out.error_estimate += inner.error_estimate;
  out.converged = out.converged && inner.converged;

  const auto with_pole = [&](double x) { return f(x) / (x - pole); };
  for (const auto& [lo, hi] :
       {std::pair{a, pole - h}, std::pair{pole + h, b}}) {
    if (!(hi > lo)) continue;
    std::vector<double> breaks = {lo, hi};
    for (double c : features) {
      for (double s : {-4.0, -1.0, 1.0, 4.0}) {
        const double x = c + s * std::max(feature_scale, 1e-12);
        if (x > lo && x < hi) breaks.push_back(x);
      }
      if (c > lo && c < hi) breaks.push_back(c);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const Result part = integrate(with_pole, breaks, settings);
    out.value += part.value;
    out.error_estimate += part.error_estimate;
    out.converged = out.converged && part.converged;
  }
  return out;
}

}  // namespace atomphase::quad
