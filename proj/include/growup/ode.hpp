#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "growup/specfun.hpp"

/// Adaptive Dormand-Prince 5(4) integration for small fixed-size systems.
namespace growup::ode {

template <std::size_t D>
using State = std::array<double, D>;

template <std::size_t D>
using Rhs = std::function<State<D>(double, const State<D>&)>;

struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double rtol = 1e-11;
  double atol = 1e-13;
  double h_init = 1e-4;
  double h_max = 1.0;
  double h_min = 1e-14;
  long max_steps = 5'000'000;
};

template <std::size_t D>
struct StepResult {
  State<D> y;
  State<D> err;
};

/// One Dormand-Prince step of size h from (t, y).
template <std::size_t D>
StepResult<D> dopri_step(const Rhs<D>& f, double t, const State<D>& y, double h) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto comb = [&](std::initializer_list<std::pair<double, const State<D>*>> terms) {
    State<D> out = y;
    for (std::size_t i = 0; i < D; ++i)
      for (const auto& [c, k] : terms) out[i] += h * c * (*k)[i];
    return out;
  };
  const State<D> k1 = f(t, y);
  const State<D> k2 = f(t + c2 * h, comb({{a21, &k1}}));
  const State<D> k3 = f(t + c3 * h, comb({{a31, &k1}, {a32, &k2}}));
  const State<D> k4 = f(t + c4 * h, comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const State<D> k5 = f(t + c5 * h, comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const State<D> k6 =
      f(t + h, comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  const State<D> y5 = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  const State<D> k7 = f(t + h, y5);
  StepResult<D> r{y5, {}};
  for (std::size_t i = 0; i < D; ++i)
    r.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  return r;
}

enum class Stop { reached_end, event, observer, failed };

template <std::size_t D>
struct Outcome {
  Stop stop;
  double t;
  State<D> y;
  long steps;
};

/// Optional scalar event g(t, y); a sign change of g across an accepted step
/// is located to `event_tol` in t by re-stepping from the step start.
template <std::size_t D>
struct Event {
  std::function<double(double, const State<D>&)> g;
  double event_tol = 1e-13;
};

/// Integrates from t0 towards t1 (either direction). The observer sees every
/// accepted (t, y) including the start; returning false stops integration.
template <std::size_t D>
Outcome<D> integrate(const Rhs<D>& f, double t0, const State<D>& y0, double t1,
                     const Tolerances& tol,
                     const std::function<bool(double, const State<D>&)>& observer = {},
                     const Event<D>* event = nullptr) {
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  State<D> y = y0;
  double h = std::min(tol.h_init, std::abs(t1 - t0));
  long steps = 0;
  if (observer && !observer(t, y)) return {Stop::observer, t, y, 0};
  double g_prev = event ? event->g(t, y) : 0.0;

  while (dir * (t1 - t) > 0.0) {
    if (++steps > tol.max_steps) return {Stop::failed, t, y, steps};
    h = std::min({h, tol.h_max, std::abs(t1 - t)});
    const auto step = dopri_step<D>(f, t, y, dir * h);
    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < D; ++i) {
      if (!std::isfinite(step.y[i])) finite = false;
      const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(step.y[i]));
      err = std::max(err, std::abs(step.err[i]) / sc);
    }
    if (!finite) err = 1e10;
    if (err > 1.0) {
      h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
      if (h < tol.h_min) return {Stop::failed, t, y, steps};
      continue;
    }
    const double t_new = (std::abs(t1 - t) <= h) ? t1 : t + dir * h;
    if (event) {
      const double g_new = event->g(t_new, step.y);
      if (g_prev * g_new <= 0.0 && g_prev != 0.0) {
        const auto value_at = [&](double s) {
          return event->g(t + dir * s, dopri_step<D>(f, t, y, dir * s).y);
        };
        double s = h;
        if (g_new != 0.0) {
          s = specfun::find_root(value_at, 0.0, h, {.tol = 0.0, .x_tol = event->event_tol})
                  .root;
        }
        const State<D> ye = dopri_step<D>(f, t, y, dir * s).y;
        if (observer) observer(t + dir * s, ye);
        return {Stop::event, t + dir * s, ye, steps};
      }
      g_prev = g_new;
    }
    t = t_new;
    y = step.y;
    if (observer && !observer(t, y)) return {Stop::observer, t, y, steps};
    h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
  }
  return {Stop::reached_end, t, y, steps};
}

}  // namespace growup::ode
