#pragma once

// Smooth solutions from the reduced characteristic systems.
//
//   hopf (γ = 3):    ẋ = k, k̇ = 0 (and ẋ = r for the r-family)
//   g53  (γ = 5/3):  ẋ = (2r+k)/3, ṙ = 0, k̇ = (r−k)² / (6(x − kt − h(k)))
//   g75  (γ = 7/5):  ẋ = (3r+2k)/5, ṙ = 0, k̇ = −(k−r)k_x/5,
//                    k̇_x = −(12k_x³(x − kt − h(k)) / (5(k−r)) + 11k_x²/5)
//   g13  (γ = 1/3):  (r, k, r_x, k_x) at fixed x, see rhs_g13.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "charflow/barotropy.hpp"
#include "charflow/cauchy.hpp"
#include "charflow/snapshot.hpp"

namespace charflow {

enum class FlowCase { hopf, g53, g75, g13 };

const char* flow_case_name(FlowCase c);
FlowCase parse_flow_case(const std::string& s);
/// Polytropic exponent the case is derived for.
double flow_case_gamma(FlowCase c);

using Constraint = std::function<double(double)>;

struct HopfState {
  double x, k;
};
struct G53State {
  double x, r, k;
};
struct G75State {
  double x, r, k, kx;
};
struct G13State {
  double x;  // parameter, not integrated
  double r, k, rx, kx;
};

/// (ẋ, ṙ, k̇). Throws NumericalError if |x − kt − h(k)| < delta_sing.
std::array<double, 3> rhs_g53(const G53State& s, double t, const Constraint& h, double delta_sing = 1e-8);

/// (ẋ, ṙ, k̇, k̇_x). Throws NumericalError if |k − r| < delta or |k_x| > kx_max.
std::array<double, 4> rhs_g75(const G75State& s, double t, const Constraint& h, double delta = 1e-8,
                              double kx_max = 1e8);

/// (ṙ, k̇, ṙ_x, k̇_x) at the state's fixed x. Throws NumericalError if r = k.
std::array<double, 4> rhs_g13(const G13State& s, double t, const Constraint& g, const Constraint& h,
                              double delta = 1e-8);

struct FlowOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double delta_sing = 1e-8;
  double kx_max = 1e8;
  std::size_t fan_size = 4001;
  std::size_t grid_n = 4001;
  /// Output nodes; when set they replace the uniform grid of grid_n points.
  std::optional<std::vector<double>> grid;
  bool refine_seeds = true;
  double g13_consistency_tol = 1e-4;
  int threads = 1;
};

template <typename State>
struct Trajectory {
  std::vector<double> t;
  std::vector<State> states;
  bool complete = true;
  std::string diagnostic;
};

Trajectory<HopfState> integrate_trajectory(const HopfState& s0, const std::vector<double>& t_grid,
                                           const FlowOptions& opt = {});
Trajectory<G53State> integrate_trajectory(const G53State& s0, const std::vector<double>& t_grid, const Constraint& h,
                                          const FlowOptions& opt = {});
Trajectory<G75State> integrate_trajectory(const G75State& s0, const std::vector<double>& t_grid, const Constraint& h,
                                          const FlowOptions& opt = {});
Trajectory<G13State> integrate_trajectory(const G13State& s0, const std::vector<double>& t_grid, const Constraint& g,
                                          const Constraint& h, const FlowOptions& opt = {});

/// One trajectory of the fan at one output time.
struct FanPoint {
  double x0;  // seed
  double x, r, k;
  double rx = 0.0, kx = 0.0;  // carried derivatives where the case has them
};

struct FlowResult {
  FlowCase flow_case = FlowCase::g53;
  std::vector<SolutionSnapshot> snapshots;
  std::vector<std::vector<FanPoint>> fans;     // per output time, in seed order
  std::vector<std::vector<FanPoint>> r_fans;   // hopf only: the r-family
  std::vector<double> g13_consistency;         // per time: max |∂r/∂x (neighbors) − r_x|, g13 only
  std::vector<std::string> warnings;
};

/// Fan seeds on the window, equidistributed in the density
/// 1 + (|r₀′| + |k₀′|)/mean + (|r₀″| + |k₀″|)/mean.
std::vector<double> fan_seeds(const CauchyData& data, std::size_t n, bool refine);

/// Integrates the fan of `flow_case` from the data and assembles a snapshot at
/// every time in t_list (ascending, starting at 0). h is required for g53 and
/// g75, g and h for g13. Throws NumericalError on characteristic crossing or
/// trajectory failure.
FlowResult solve_cauchy(FlowCase flow_case, const CauchyData& data, const Barotropy& law, const Constraint& h,
                        const Constraint& g, const std::vector<double>& t_list, const FlowOptions& opt = {});

/// Snapshot on the nodes of `grid` lying inside [x.front(), x.back()] from
/// scattered (x, r, k) with x strictly increasing.
SolutionSnapshot assemble_snapshot(double t, const std::vector<double>& x, const std::vector<double>& r,
                                   const std::vector<double>& k, const std::vector<double>& grid,
                                   const Barotropy& law);

}  // namespace charflow
