#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "atomphase/common.hpp"

namespace atomphase::ode {

using State = std::array<Complex, 2>;

struct Settings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  double safety = 0.9;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                        c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat, the embedded 4th-order error weights (k7 = f at the new point).
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace detail

/// Advance y from t0 to t1 with the adaptive Dormand-Prince 5(4) pair.
/// The endpoint is hit exactly (the last step is clamped). Throws
/// NumericalError on step-size collapse.
template <class Rhs>
void integrate_to(Rhs&& rhs, State& y, double t0, double t1,
                  const Settings& settings = {}) {
  namespace d = detail;
  double t = t0;
  double h = 0.01 * (t1 - t0);
  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  rhs(t, y, k1);

  while (t < t1) {
    if (h > t1 - t) h = t1 - t;
    if (h < 1e-14 * std::max(std::abs(t), 1.0))
      throw NumericalError("ode: step size collapsed at t = " +
                           std::to_string(t));

    for (int i = 0; i < 2; ++i) ytmp[i] = y[i] + h * d::a21 * k1[i];
    rhs(t + d::c2 * h, ytmp, k2);
    for (int i = 0; i < 2; ++i)
      ytmp[i] = y[i] + h * (d::a31 * k1[i] + d::a32 * k2[i]);
    rhs(t + d::c3 * h, ytmp, k3);
    for (int i = 0; i < 2; ++i)
      ytmp[i] = y[i] + h * (d::a41 * k1[i] + d::a42 * k2[i] + d::a43 * k3[i]);
    rhs(t + d::c4 * h, ytmp, k4);
    for (int i = 0; i < 2; ++i)
      ytmp[i] = y[i] + h * (d::a51 * k1[i] + d::a52 * k2[i] + d::a53 * k3[i] +
                            d::a54 * k4[i]);
    rhs(t + d::c5 * h, ytmp, k5);
    for (int i = 0; i < 2; ++i)
      ytmp[i] = y[i] + h * (d::a61 * k1[i] + d::a62 * k2[i] + d::a63 * k3[i] +
                            d::a64 * k4[i] + d::a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (int i = 0; i < 2; ++i)
      ynew[i] = y[i] + h * (d::b1 * k1[i] + d::b3 * k3[i] + d::b4 * k4[i] +
                            d::b5 * k5[i] + d::b6 * k6[i]);
    rhs(t + h, ynew, k7);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const Complex de = h * (d::e1 * k1[i] + d::e3 * k3[i] + d::e4 * k4[i] +
                              d::e5 * k5[i] + d::e6 * k6[i] + d::e7 * k7[i]);
      const double scale =
          settings.abs_tol +
          settings.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(de) / scale);
    }

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // first-same-as-last
    }
    const double factor =
        (err > 0.0) ? settings.safety * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
}

}  // namespace atomphase::ode
