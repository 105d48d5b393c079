#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "wsym/linalg.hpp"

namespace wsym {

/// One classical fourth-order Runge–Kutta step of ẋ = f(t, x).
template <class F>
Vec rk4_step(F&& f, double t, const Vec& x, double h) {
  const Vec k1 = f(t, x);
  const Vec k2 = f(t + 0.5 * h, Vec(x + 0.5 * h * k1));
  const Vec k3 = f(t + 0.5 * h, Vec(x + 0.5 * h * k2));
  const Vec k4 = f(t + h, Vec(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Number of equal steps of size at most dt covering [t0, t1].
inline int step_count(double t0, double t1, double dt) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(t1 - t0) / dt - 1e-9)));
}

/// Fixed-step integration from t0 to t1 (either direction). observer(t, x) is
/// called after every step.
template <class F, class Observer>
Vec rk4_integrate(F&& f, Vec x, double t0, double t1, int steps, Observer&& observer) {
  const double h = (t1 - t0) / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    x = rk4_step(f, t, x, h);
    observer(k + 1 == steps ? t1 : t + h, x);
  }
  return x;
}

template <class F>
Vec rk4_integrate(F&& f, Vec x, double t0, double t1, int steps) {
  return rk4_integrate(std::forward<F>(f), std::move(x), t0, t1, steps, [](double, const Vec&) {});
}

}  // namespace wsym
