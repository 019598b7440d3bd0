#pragma once

// Adaptive Dormand-Prince marching with a domain guard. Steps land exactly on
// requested stop times. When a step leaves the domain (or produces a
// non-finite state) it is retried with half the step until the step falls
// below min_step, at which point the march reports the last inside time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include <boost/numeric/odeint.hpp>

#include "hypdisk/errors.hpp"

namespace hypdisk::detail {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double min_step = 1e-12;
  double initial_step = 1e-3;
  std::size_t max_steps = 2'000'000;
};

template <std::size_t N>
struct MarchResult {
  State<N> state;
  double t;
  bool tripped;
};

// rhs(x, dxdt, t); inside(x) -> bool; on_stop(index, t, x); on_step(t, x).
template <std::size_t N, class Rhs, class Inside, class OnStop, class OnStep>
MarchResult<N> march(Rhs&& rhs, State<N> x, double t0,
                     std::span<const double> stops, const StepControl& sc,
                     Inside&& inside, OnStop&& on_stop, OnStep&& on_step) {
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(
      sc.abs_tol, sc.rel_tol, odeint::runge_kutta_dopri5<State<N>>());
  auto sys = [&rhs](const State<N>& y, State<N>& dy, double t) { rhs(y, dy, t); };

  double t = t0;
  double dt = sc.initial_step;
  double cap = INFINITY;
  std::size_t steps = 0;
  for (std::size_t k = 0; k < stops.size(); ++k) {
    const double target = stops[k];
    while (t < target) {
      if (++steps > sc.max_steps)
        throw Error("step_limit", "adaptive march exceeded its step budget");
      if (!(dt > 0.0) || !std::isfinite(dt)) dt = std::min(cap, sc.initial_step);
      dt = std::min({dt, cap, target - t});
      bool last = (dt == target - t);
      State<N> trial = x;
      double tt = t;
      double h = dt;
      auto res = stepper.try_step(sys, trial, tt, h);
      if (res == odeint::fail) {
        dt = h;
        if (dt < sc.min_step) return {x, t, true};
        continue;
      }
      bool ok = inside(trial);
      for (double v : trial) ok = ok && std::isfinite(v);
      if (!ok) {
        cap = 0.5 * (tt - t);
        dt = cap;
        if (cap < sc.min_step) return {x, t, true};
        continue;
      }
      x = trial;
      t = last ? target : tt;
      dt = h;
      on_step(t, x);
    }
    on_stop(k, t, x);
  }
  return {x, t, false};
}

}  // namespace hypdisk::detail
