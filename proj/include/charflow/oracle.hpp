#pragma once

// Finite-volume reference solver for ρ_t + (ρu)_x = 0, (ρu)_t + (ρu² + ρ^γ/γ)_x = 0:
// MUSCL (minmod on ρ and u) + Rusanov flux + SSP-RK2, outflow ghost cells.

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "charflow/barotropy.hpp"
#include "charflow/cauchy.hpp"
#include "charflow/catalog.hpp"
#include "charflow/snapshot.hpp"

namespace charflow {

struct FvState {
  Eigen::ArrayXd x;    // cell centers
  Eigen::ArrayXd rho;  // cell averages
  Eigen::ArrayXd m;    // ρu
  double dx = 0.0;
  double t = 0.0;
  double gamma = 5.0 / 3.0;

  Eigen::Index size() const { return x.size(); }
};

/// Cells of width ≈ dx covering the window, fields sampled at the centers.
FvState fv_initial(Window window, double dx, double gamma, const std::function<double(double)>& u0,
                   const std::function<double(double)>& rho0);
/// Same, with (u, ρ) from Riemann data through the law's φ.
FvState fv_initial(const CauchyData& data, const Barotropy& law, double dx);

/// max(|u| + c) over the cells.
double fv_max_speed(const FvState& s);

/// One SSP-RK2 step of size min(cfl·dx/max(|u|+c), dt_max). Throws
/// NumericalError if a density turns non-positive.
FvState fv_step(const FvState& s, double cfl, double dt_max = 1e300, int threads = 1);

struct FvOptions {
  double cfl = 0.5;
  int threads = 1;
  std::size_t max_steps = 10'000'000;
};

/// States at every time in `times` (ascending, ≥ s0.t); the last step before
/// each output time is shortened to land on it.
std::vector<FvState> fv_solve(const FvState& s0, const std::vector<double>& times, const FvOptions& opt = {});

SolutionSnapshot to_snapshot(const FvState& s, const Barotropy& law);

struct CompareNorms {
  double l1_rho = 0.0, linf_rho = 0.0;  // relative to ∫|ρ_a| and max|ρ_a|
  double l1_u = 0.0, linf_u = 0.0;
  std::size_t points = 0;
};

/// Norms of b − a on the nodes of a lying inside b's range (b interpolated).
/// Throws ValidationError if the ranges do not overlap.
CompareNorms compare(const SolutionSnapshot& a, const SolutionSnapshot& b);

/// Max |r(t) − r(0)| (plus) or |k(t) − k(0)| (minus) along dx/dt = u ± c
/// traced by Heun steps through `run` (states at increasing times, fields
/// interpolated linearly in time and by monotone cubics in x). Throws
/// DomainError when a path leaves the window.
double characteristic_drift(const std::vector<FvState>& run, const Barotropy& law, Side side,
                            const std::vector<double>& seeds, int substeps = 4);

}  // namespace charflow
