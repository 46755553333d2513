#pragma once

// Dormand–Prince 5(4) with Hairer's continuous extension, on fixed-size Eigen states.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "charflow/error.hpp"

namespace charflow {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_initial = 0.0;  // 0 selects an automatic first step
  double h_min = 1e-13;    // relative to the integration span
  long max_steps = 2'000'000;
};

template <int N>
struct OdeResult {
  using State = Eigen::Matrix<double, N, 1>;
  std::vector<double> t;     // output times actually reached
  std::vector<State> y;      // states at those times
  bool complete = true;
  double t_reached = 0.0;
  std::string diagnostic;    // why integration stopped early
  long steps = 0;
  long rejected = 0;
};

/// Integrates y' = rhs(t, y) from (t0, y0) and reports y at every time in
/// t_out (ascending, all >= t0). A NumericalError thrown by rhs counts as a
/// rejected step; if the step then underflows the result is partial.
template <int N, typename Rhs>
OdeResult<N> integrate_dopri5(Rhs&& rhs, double t0, const Eigen::Matrix<double, N, 1>& y0,
                              const std::vector<double>& t_out, const OdeOptions& opt = {}) {
  using State = Eigen::Matrix<double, N, 1>;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  OdeResult<N> out;
  out.t_reached = t0;
  if (t_out.empty()) return out;
  const double t_end = t_out.back();
  std::size_t next_out = 0;
  while (next_out < t_out.size() && t_out[next_out] <= t0) {
    out.t.push_back(t_out[next_out]);
    out.y.push_back(y0);
    ++next_out;
  }
  if (next_out == t_out.size()) return out;

  const double span = t_end - t0;
  const double h_floor = opt.h_min * std::max(1.0, std::abs(span));
  auto fail = [&](double t, std::string why) {
    out.complete = false;
    out.t_reached = t;
    out.diagnostic = std::move(why);
    return out;
  };

  State y = y0;
  double t = t0;
  State k1;
  try {
    k1 = rhs(t, y);
  } catch (const NumericalError& e) {
    return fail(t, e.what());
  }

  auto err_norm = [&](const State& err, const State& ya, const State& yb) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      const double q = err[i] / sc;
      s += q * q;
    }
    return std::sqrt(s / static_cast<double>(err.size()));
  };

  double h = opt.h_initial;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    State sc = (opt.atol + opt.rtol * y.array().abs()).matrix();
    const double dnf = std::sqrt((k1.array() / sc.array()).square().mean());
    const double dny = std::sqrt((y.array() / sc.array()).square().mean());
    h = (dnf < 1e-10 || dny < 1e-10) ? 1e-6 : 0.01 * dny / dnf;
    h = std::min(h, span);
  }

  double fac_old = 1e-4;
  bool last_rejected = false;
  State k2, k3, k4, k5, k6, k7, y1, ytmp;
  while (t < t_end) {
    if (out.steps + out.rejected > opt.max_steps) return fail(t, "step limit exceeded");
    if (h < h_floor) return fail(t, "step size underflow near t=" + std::to_string(t));
    bool final_step = false;
    if (t + h >= t_end) {
      h = t_end - t;
      final_step = true;
    }

    bool ok = true;
    try {
      ytmp = y + h * a21 * k1;
      k2 = rhs(t + c2 * h, ytmp);
      ytmp = y + h * (a31 * k1 + a32 * k2);
      k3 = rhs(t + c3 * h, ytmp);
      ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      k4 = rhs(t + c4 * h, ytmp);
      ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      k5 = rhs(t + c5 * h, ytmp);
      ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      k6 = rhs(t + h, ytmp);
      y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      k7 = rhs(t + h, y1);
      ok = y1.allFinite() && k7.allFinite();
    } catch (const NumericalError&) {
      ok = false;
    }
    if (!ok) {
      ++out.rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = err_norm(err, y, y1);
    // PI step control as in DOPRI5 (beta = 0.04).
    const double fac11 = std::pow(std::max(en, 1e-300), 0.2 - 0.04 * 0.75);
    double fac = fac11 / std::pow(fac_old, 0.04);
    fac = std::clamp(fac / 0.9, 1.0 / 10.0, 5.0);
    double h_new = h / fac;

    if (en > 1.0) {
      ++out.rejected;
      h = h / std::min(5.0, fac11 / 0.9);
      last_rejected = true;
      continue;
    }

    ++out.steps;
    fac_old = std::max(en, 1e-4);
    const double t_new = final_step ? t_end : t + h;
    while (next_out < t_out.size() && t_out[next_out] <= t_new) {
      const double theta = std::min(1.0, (t_out[next_out] - t) / h);
      const double theta1 = 1.0 - theta;
      const State rc2 = y1 - y;
      const State rc3 = h * k1 - rc2;
      const State rc4 = rc2 - h * k7 - rc3;
      const State rc5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      out.t.push_back(t_out[next_out]);
      out.y.push_back(y + theta * (rc2 + theta1 * (rc3 + theta * (rc4 + theta1 * rc5))));
      ++next_out;
    }
    y = y1;
    k1 = k7;
    t = t_new;
    if (last_rejected) h_new = std::min(h_new, h);
    last_rejected = false;
    h = h_new;
  }
  out.t_reached = t;
  return out;
}

}  // namespace charflow
