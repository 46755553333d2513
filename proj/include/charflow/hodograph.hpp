#pragma once

// General solution of the γ = 5/3 system in hodograph variables:
//
//   t = 108/(k−r)² · (f₁′ − f₂′ + 2(f₁+f₂)/(k−r))
//   x =  36/(k−r)² · ((2k+r)f₁′ − (k+2r)f₂′ + 3(r+k)(f₁+f₂)/(k−r))
//
// with f₁ = f₁(r), f₂ = f₂(k), and f₂″ = h/18 for the constraint h of the
// minus family.

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "charflow/barotropy.hpp"
#include "charflow/cauchy.hpp"
#include "charflow/flow.hpp"
#include "charflow/snapshot.hpp"

namespace charflow {

/// Value and first two derivatives.
struct Deriv2 {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
};

using HodographFn = std::function<Deriv2(double)>;

struct HodographPair {
  HodographFn f1;  // of r
  HodographFn f2;  // of k
};

struct TimePlace {
  double t, x;
};

/// Throws DomainError if r = k.
TimePlace gensol_map(const HodographPair& p, double r, double k);
/// ∂(t, x)/∂(r, k), rows t and x.
Eigen::Matrix2d gensol_jacobian(const HodographPair& p, double r, double k);

/// k³/108 − k·atan(k)/36 + ln(1+k²)/72.
Deriv2 f2_case_a(double k);

/// x(r) = (r + s₊ + s₋)/3 with real cube roots, the inverse of
/// r₀(x) = (x³+x+1)/(1+x²). Throws DomainError if the inner radicand is negative.
double x_of_r_case_a(double r);
/// f₁(r) = F(x(r)) where F is the right-hand side of the t = 0 identity for
/// problem (a); derivatives by the chain rule through r₀.
Deriv2 f1_case_a(double r);
HodographPair pair_case_a();

/// f₂ with f₂″ = h/18, f₂(anchor) = f₂′(anchor) = 0, tabulated on [k_lo, k_hi]
/// and evaluated by Taylor's formula with integral remainder from the nearest
/// node below. Throws DomainError outside the range or where h is not finite.
HodographFn f2_from_h(const Constraint& h, double k_lo, double k_hi, double k_anchor, std::size_t nodes = 2001);

/// f₁ − C₁r − C₂ and f₂ + C₁k + C₂.
HodographPair gauge_shift(const HodographPair& p, double c1, double c2);

struct InvertOptions {
  int max_iter = 50;
  double tol = 1e-10;  // on |residual| / (1 + |t| + |x|)
};

struct InvertResult {
  double r = 0.0, k = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Damped Newton for gensol_map(r, k) = (t, x). Throws DomainError for a
/// guess with r = k, NumericalError on a singular Jacobian or no convergence.
InvertResult gensol_invert(const HodographPair& p, double t, double x, RiemannPair guess,
                           const InvertOptions& opt = {});

struct HodographSweep {
  SolutionSnapshot snapshot;     // converged nodes only
  std::vector<double> failed_x;  // nodes where Newton gave up
  std::size_t attempted = 0;
  double coverage() const {
    return attempted ? static_cast<double>(snapshot.size()) / static_cast<double>(attempted) : 0.0;
  }
};

/// Inverts gensol at time t on the nodes xs (ascending). The first node is
/// reached from the initial data by continuation in time at fixed x, the
/// remaining ones by a sweep outward from the middle of xs, each seeded by its
/// converged neighbor.
HodographSweep hodograph_solve(const HodographPair& p, const CauchyData& data, const Barotropy& law, double t,
                               const std::vector<double>& xs, int time_steps = 40, const InvertOptions& opt = {});

}  // namespace charflow
