#include "charflow/flow.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "charflow/io.hpp"
#include "charflow/numerics.hpp"
#include "charflow/ode.hpp"

namespace charflow {

const char* flow_case_name(FlowCase c) {
  switch (c) {
    case FlowCase::hopf: return "hopf";
    case FlowCase::g53: return "g53";
    case FlowCase::g75: return "g75";
    case FlowCase::g13: return "g13";
  }
  return "?";
}

FlowCase parse_flow_case(const std::string& s) {
  if (s == "hopf") return FlowCase::hopf;
  if (s == "g53") return FlowCase::g53;
  if (s == "g75") return FlowCase::g75;
  if (s == "g13") return FlowCase::g13;
  throw ValidationError("unknown flow case '" + s + "'");
}

double flow_case_gamma(FlowCase c) {
  switch (c) {
    case FlowCase::hopf: return 3.0;
    case FlowCase::g53: return 5.0 / 3.0;
    case FlowCase::g75: return 7.0 / 5.0;
    case FlowCase::g13: return 1.0 / 3.0;
  }
  return 0.0;
}

std::array<double, 3> rhs_g53(const G53State& s, double t, const Constraint& h, double delta_sing) {
  const double den = s.x - s.k * t - h(s.k);
  if (!(std::abs(den) >= delta_sing)) {
    throw NumericalError("g53: |x - kt - h(k)| = " + format_double(std::abs(den)) + " below delta_sing at x=" +
                         format_double(s.x) + ", t=" + format_double(t));
  }
  const double d = s.r - s.k;
  return {(2.0 * s.r + s.k) / 3.0, 0.0, d * d / (6.0 * den)};
}

std::array<double, 4> rhs_g75(const G75State& s, double t, const Constraint& h, double delta, double kx_max) {
  const double kr = s.k - s.r;
  if (!(std::abs(kr) >= delta)) throw NumericalError("g75: r and k coincide (vacuum) at x=" + format_double(s.x));
  if (!(std::abs(s.kx) <= kx_max)) {
    throw NumericalError("g75: |k_x| blow-up at x=" + format_double(s.x) + ", t=" + format_double(t));
  }
  const double w = s.x - s.k * t - h(s.k);
  const double kx2 = s.kx * s.kx;
  return {(3.0 * s.r + 2.0 * s.k) / 5.0, 0.0, -kr * s.kx / 5.0, -(12.0 * kx2 * s.kx * w / (5.0 * kr) + 2.2 * kx2)};
}

std::array<double, 4> rhs_g13(const G13State& s, double, const Constraint& g, const Constraint& h, double delta) {
  const double kr = s.k - s.r;
  if (!(std::abs(kr) >= delta)) throw NumericalError("g13: r and k coincide (vacuum) at x=" + format_double(s.x));
  const double rdot = -(s.r + 2.0 * s.k) / 3.0 * s.rx;
  const double kdot = -(s.k + 2.0 * s.r) / 3.0 * s.kx;
  const double rxdot = -(s.rx + 2.0 * s.kx) / 3.0 * s.rx -
                       (s.r + 2.0 * s.k) / 3.0 * (kr * kr * s.rx * s.rx * s.rx * g(s.r) - 2.0 * s.rx * s.kx / kr);
  const double kxdot = -(s.kx + 2.0 * s.rx) / 3.0 * s.kx -
                       (s.k + 2.0 * s.r) / 3.0 * (kr * kr * s.kx * s.kx * s.kx * h(s.k) + 2.0 * s.kx * s.rx / kr);
  return {rdot, kdot, rxdot, kxdot};
}

namespace {

OdeOptions ode_options(const FlowOptions& opt) {
  OdeOptions o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  return o;
}

template <typename State, int N, typename Rhs, typename Unpack>
Trajectory<State> run(Rhs&& rhs, const Eigen::Matrix<double, N, 1>& y0, const std::vector<double>& t_grid,
                      const FlowOptions& opt, Unpack&& unpack) {
  const auto res = integrate_dopri5<N>(rhs, 0.0, y0, t_grid, ode_options(opt));
  Trajectory<State> tr;
  tr.t = res.t;
  tr.complete = res.complete;
  tr.diagnostic = res.diagnostic;
  tr.states.reserve(res.y.size());
  for (const auto& y : res.y) tr.states.push_back(unpack(y));
  return tr;
}

}  // namespace

Trajectory<HopfState> integrate_trajectory(const HopfState& s0, const std::vector<double>& t_grid,
                                           const FlowOptions& opt) {
  using V = Eigen::Vector2d;
  return run<HopfState, 2>([](double, const V& y) { return V(y[1], 0.0); }, V(s0.x, s0.k), t_grid, opt,
                           [](const V& y) { return HopfState{y[0], y[1]}; });
}

Trajectory<G53State> integrate_trajectory(const G53State& s0, const std::vector<double>& t_grid, const Constraint& h,
                                          const FlowOptions& opt) {
  using V = Eigen::Vector2d;
  const double r = s0.r;
  auto rhs = [&](double t, const V& y) {
    const auto d = rhs_g53({y[0], r, y[1]}, t, h, opt.delta_sing);
    return V(d[0], d[2]);
  };
  return run<G53State, 2>(rhs, V(s0.x, s0.k), t_grid, opt, [r](const V& y) { return G53State{y[0], r, y[1]}; });
}

Trajectory<G75State> integrate_trajectory(const G75State& s0, const std::vector<double>& t_grid, const Constraint& h,
                                          const FlowOptions& opt) {
  using V = Eigen::Vector3d;
  const double r = s0.r;
  auto rhs = [&](double t, const V& y) {
    const auto d = rhs_g75({y[0], r, y[1], y[2]}, t, h, opt.delta_sing, opt.kx_max);
    return V(d[0], d[2], d[3]);
  };
  return run<G75State, 3>(rhs, V(s0.x, s0.k, s0.kx), t_grid, opt,
                          [r](const V& y) { return G75State{y[0], r, y[1], y[2]}; });
}

Trajectory<G13State> integrate_trajectory(const G13State& s0, const std::vector<double>& t_grid, const Constraint& g,
                                          const Constraint& h, const FlowOptions& opt) {
  using V = Eigen::Vector4d;
  const double x = s0.x;
  auto rhs = [&](double t, const V& y) {
    const auto d = rhs_g13({x, y[0], y[1], y[2], y[3]}, t, g, h, opt.delta_sing);
    return V(d[0], d[1], d[2], d[3]);
  };
  return run<G13State, 4>(rhs, V(s0.r, s0.k, s0.rx, s0.kx), t_grid, opt,
                          [x](const V& y) { return G13State{x, y[0], y[1], y[2], y[3]}; });
}

std::vector<double> fan_seeds(const CauchyData& data, std::size_t n, bool refine) {
  if (n < 2) throw ValidationError("fan needs at least two seeds");
  if (!refine) return linspace(data.window.lo, data.window.hi, n);
  const std::vector<double> fine = linspace(data.window.lo, data.window.hi, 8 * n);
  std::vector<double> slope(fine.size()), bend(fine.size());
  double mean_slope = 0.0, mean_bend = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    slope[i] = std::abs(data.dr[1].eval(fine[i])) + std::abs(data.dk[1].eval(fine[i]));
    bend[i] = std::abs(data.dr[2].eval(fine[i])) + std::abs(data.dk[2].eval(fine[i]));
    mean_slope += slope[i];
    mean_bend += bend[i];
  }
  mean_slope /= static_cast<double>(fine.size());
  mean_bend /= static_cast<double>(fine.size());
  std::vector<double> w(fine.size(), 1.0);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    if (mean_slope > 0.0) w[i] += slope[i] / mean_slope;
    if (mean_bend > 0.0) w[i] += bend[i] / mean_bend;
  }
  std::vector<double> cum(fine.size(), 0.0);
  for (std::size_t i = 1; i < fine.size(); ++i) cum[i] = cum[i - 1] + 0.5 * (w[i] + w[i - 1]) * (fine[i] - fine[i - 1]);
  std::vector<double> seeds(n);
  std::size_t j = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const double level = cum.back() * static_cast<double>(s) / static_cast<double>(n - 1);
    while (j + 2 < fine.size() && cum[j + 1] < level) ++j;
    const double f = (level - cum[j]) / (cum[j + 1] - cum[j]);
    seeds[s] = fine[j] + std::clamp(f, 0.0, 1.0) * (fine[j + 1] - fine[j]);
  }
  seeds.front() = data.window.lo;
  seeds.back() = data.window.hi;
  return seeds;
}

SolutionSnapshot assemble_snapshot(double t, const std::vector<double>& x, const std::vector<double>& r,
                                   const std::vector<double>& k, const std::vector<double>& grid,
                                   const Barotropy& law) {
  const MonotoneCubic ri(x, r), ki(x, k);
  SolutionSnapshot s;
  s.t = t;
  for (double g : grid) {
    if (g < x.front() || g > x.back()) continue;
    const double rv = ri(g), kv = ki(g);
    const GasState st = law.state_from_riemann(rv, kv);
    s.x.push_back(g);
    s.r.push_back(rv);
    s.k.push_back(kv);
    s.u.push_back(st.u);
    s.rho.push_back(st.rho);
  }
  if (const auto gamma = law.gamma(); gamma && s.size() >= 2) s.integrals = conserved_integrals(s, *gamma);
  s.max_ux = max_abs_ux(s);
  return s;
}

namespace {

void check_monotone(const std::vector<FanPoint>& fan, double t, const char* family) {
  for (std::size_t i = 1; i < fan.size(); ++i) {
    if (!(fan[i].x > fan[i - 1].x)) {
      throw NumericalError(std::string("characteristic crossing in the ") + family + " fan at t=" + format_double(t) +
                           ": seeds x0=" + format_double(fan[i - 1].x0) + " and x0=" + format_double(fan[i].x0) +
                           " reach x=" + format_double(fan[i - 1].x) + " and x=" + format_double(fan[i].x));
    }
  }
}

template <typename State>
void require_complete(const Trajectory<State>& tr, double x0) {
  if (!tr.complete) {
    throw NumericalError("trajectory from x0=" + format_double(x0) + " stopped early: " + tr.diagnostic);
  }
}

std::vector<double> column(const std::vector<FanPoint>& fan, double FanPoint::*field) {
  std::vector<double> out(fan.size());
  for (std::size_t i = 0; i < fan.size(); ++i) out[i] = fan[i].*field;
  return out;
}

}  // namespace

FlowResult solve_cauchy(FlowCase fc, const CauchyData& data, const Barotropy& law, const Constraint& h,
                        const Constraint& g, const std::vector<double>& t_list, const FlowOptions& opt) {
  const auto gamma = law.gamma();
  if (!gamma || std::abs(*gamma - flow_case_gamma(fc)) > 1e-12) {
    throw ValidationError(std::string("flow case ") + flow_case_name(fc) + " needs a polytropic law with gamma=" +
                          format_double(flow_case_gamma(fc)) + ", got " + law.name());
  }
  if (t_list.empty() || t_list.front() != 0.0 || !std::is_sorted(t_list.begin(), t_list.end())) {
    throw ValidationError("times must be ascending and start at 0");
  }
  if ((fc == FlowCase::g53 || fc == FlowCase::g75 || fc == FlowCase::g13) && !h) {
    throw ValidationError(std::string(flow_case_name(fc)) + " needs a constraint h(k)");
  }
  if (fc == FlowCase::g13 && !g) throw ValidationError("g13 needs a constraint g(r)");

  const std::vector<double> seeds = fan_seeds(data, opt.fan_size, opt.refine_seeds);
  const std::vector<double> grid = opt.grid ? *opt.grid : linspace(data.window.lo, data.window.hi, opt.grid_n);
  const std::size_t nt = t_list.size(), ns = seeds.size();

  FlowResult res;
  res.flow_case = fc;
  res.fans.assign(nt, std::vector<FanPoint>(ns));
  if (fc == FlowCase::hopf) res.r_fans.assign(nt, std::vector<FanPoint>(ns));

  parallel_for(ns, opt.threads, [&](std::size_t i) {
    const double x0 = seeds[i];
    const double r0 = data.r0.eval(x0), k0 = data.k0.eval(x0);
    switch (fc) {
      case FlowCase::hopf: {
        const auto tk = integrate_trajectory(HopfState{x0, k0}, t_list, opt);
        const auto tr = integrate_trajectory(HopfState{x0, r0}, t_list, opt);
        require_complete(tk, x0);
        require_complete(tr, x0);
        for (std::size_t j = 0; j < nt; ++j) {
          res.fans[j][i] = {x0, tk.states[j].x, r0, tk.states[j].k};
          res.r_fans[j][i] = {x0, tr.states[j].x, tr.states[j].k, k0};
        }
        break;
      }
      case FlowCase::g53: {
        const auto tr = integrate_trajectory(G53State{x0, r0, k0}, t_list, h, opt);
        require_complete(tr, x0);
        for (std::size_t j = 0; j < nt; ++j) {
          const auto& s = tr.states[j];
          res.fans[j][i] = {x0, s.x, s.r, s.k};
        }
        break;
      }
      case FlowCase::g75: {
        const auto tr = integrate_trajectory(G75State{x0, r0, k0, data.dk[1].eval(x0)}, t_list, h, opt);
        require_complete(tr, x0);
        for (std::size_t j = 0; j < nt; ++j) {
          const auto& s = tr.states[j];
          res.fans[j][i] = {x0, s.x, s.r, s.k, 0.0, s.kx};
        }
        break;
      }
      case FlowCase::g13: {
        const G13State s0{x0, r0, k0, data.dr[1].eval(x0), data.dk[1].eval(x0)};
        const auto tr = integrate_trajectory(s0, t_list, g, h, opt);
        require_complete(tr, x0);
        for (std::size_t j = 0; j < nt; ++j) {
          const auto& s = tr.states[j];
          res.fans[j][i] = {x0, x0, s.r, s.k, s.rx, s.kx};
        }
        break;
      }
    }
  });

  for (std::size_t j = 0; j < nt; ++j) {
    const double t = t_list[j];
    const auto& fan = res.fans[j];
    check_monotone(fan, t, fc == FlowCase::hopf ? "k" : "characteristic");
    if (fc == FlowCase::hopf) {
      const auto& rf = res.r_fans[j];
      check_monotone(rf, t, "r");
      // Each family carries its own invariant; the output grid is limited to where both are known.
      const MonotoneCubic ki(column(fan, &FanPoint::x), column(fan, &FanPoint::k));
      const MonotoneCubic ri(column(rf, &FanPoint::x), column(rf, &FanPoint::r));
      const double lo = std::max(fan.front().x, rf.front().x), hi = std::min(fan.back().x, rf.back().x);
      std::vector<double> xs, rs, ks;
      for (double gx : grid) {
        if (gx < lo || gx > hi) continue;
        xs.push_back(gx);
        rs.push_back(ri(gx));
        ks.push_back(ki(gx));
      }
      if (xs.size() < 2) throw NumericalError("hopf fans do not overlap at t=" + format_double(t));
      res.snapshots.push_back(assemble_snapshot(t, xs, rs, ks, xs, law));
    } else {
      res.snapshots.push_back(assemble_snapshot(t, column(fan, &FanPoint::x), column(fan, &FanPoint::r),
                                                column(fan, &FanPoint::k), grid, law));
    }
    if (fc == FlowCase::g13) {
      double worst = 0.0;
      for (std::size_t i = 1; i + 1 < fan.size(); ++i) {
        const double h0 = fan[i].x - fan[i - 1].x, h1 = fan[i + 1].x - fan[i].x;
        auto d = [&](double FanPoint::*f) {
          return (-(h1 / (h0 * (h0 + h1))) * fan[i - 1].*f + ((h1 - h0) / (h0 * h1)) * fan[i].*f +
                  (h0 / (h1 * (h0 + h1))) * fan[i + 1].*f);
        };
        worst = std::max({worst, std::abs(d(&FanPoint::r) - fan[i].rx), std::abs(d(&FanPoint::k) - fan[i].kx)});
      }
      res.g13_consistency.push_back(worst);
      if (worst > opt.g13_consistency_tol) {
        res.warnings.push_back("g13 cross-fan consistency " + format_double(worst) + " exceeds tolerance at t=" +
                               format_double(t));
      }
    }
  }
  return res;
}

}  // namespace charflow
