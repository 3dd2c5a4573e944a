#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace saari {

struct OdeOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double max_step = 0.0;  // 0 = no cap
  long max_steps = 20'000'000;
};

/// Adaptive Dormand-Prince 5(4) with PI step-size control and cubic-Hermite
/// dense sampling at uniform intervals.
///
/// rhs(t, y, dydt) evaluates the derivative.  sink(t, y) receives the state
/// at t0, t0 + dt_sample, ... (and at the stop point when stop triggers).
/// stop(t, y) is checked after each accepted step; returning true truncates
/// the integration.  Returns true when stopped early.
template <class State, class Rhs, class Sink, class Stop>
bool integrate_dopri5(Rhs&& rhs, const State& y0, double t0, double t_end, double dt_sample,
                      const OdeOptions& opts, Sink&& sink, Stop&& stop) {
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
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  const double span = t_end - t0;
  if (!(span > 0.0)) throw std::invalid_argument("integrate_dopri5: empty time span");

  double t = t0;
  State y = y0;
  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;
  rhs(t, y, k1);

  double h = span * 1e-3;
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  sink(t, y);  // exact sample at t0
  double next_sample = t0 + dt_sample;
  auto emit_through = [&](double t_lo, const State& y_lo, const State& f_lo, double t_hi,
                          const State& y_hi, const State& f_hi) {
    while (next_sample <= t_hi + 1e-9 * std::abs(dt_sample)) {
      const double hh = t_hi - t_lo;
      const double tau = std::clamp((next_sample - t_lo) / hh, 0.0, 1.0);
      const double t2 = tau * tau, t3 = t2 * tau;
      State ys = (2 * t3 - 3 * t2 + 1) * y_lo + ((t3 - 2 * t2 + tau) * hh) * f_lo +
                 (-2 * t3 + 3 * t2) * y_hi + ((t3 - t2) * hh) * f_hi;
      sink(next_sample, ys);
      next_sample += dt_sample;
    }
  };

  double err_prev = 1e-4;
  long n_steps = 0;
  bool last = false;
  while (true) {
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    } else {
      last = false;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw std::runtime_error("integrate_dopri5: step-size underflow at t = " + std::to_string(t));
    if (++n_steps > opts.max_steps)
      throw std::runtime_error("integrate_dopri5: step limit exceeded at t = " + std::to_string(t) +
                               ", h = " + std::to_string(h));

    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7);  // FSAL
    yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_sq = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = yerr[i] / sc;
      err_sq += r * r;
    }
    const double err = std::sqrt(err_sq / y.size());

    if (!std::isfinite(err)) {  // overshot a singularity; retreat hard
      h *= 0.1;
      continue;
    }
    if (err <= 1.0) {
      emit_through(t, y, k1, t + h, ynew, k7);
      t += h;
      y = ynew;
      k1 = k7;
      if (stop(t, y)) {
        if (next_sample <= t) {
          sink(t, y);  // final truncated sample
          next_sample = t + dt_sample;
        }
        return true;
      }
      if (last) return false;
      const double e = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(e, -0.17) * std::pow(err_prev, 0.04);
      fac = std::clamp(fac, 0.2, 5.0);
      h *= fac;
      if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
      err_prev = e;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }
}

}  // namespace saari
