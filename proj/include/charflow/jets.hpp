#pragma once

// Total derivatives D̄_x, D̄_t on the jet space of the isentropic system,
// characteristic fields X± = D̄_t + (u ± c) D̄_x, and invariance testing.
//
// Derivatives are exact: a JetFunction is evaluated at a Dual-lifted jet
// point whose tangent is the direction of the total derivative.

#include <array>
#include <cstdint>
#include <vector>

#include "charflow/barotropy.hpp"
#include "charflow/catalog.hpp"
#include "charflow/jet.hpp"

namespace charflow {

/// u_t = −(u u_x + c²/ρ ρ_x) on the system.
template <typename S>
S system_ut(const Barotropy& law, const Jet<S>& j) {
  const S c = law.sound_speed(j.rho);
  return -(j.u * j.ux + c * c / j.rho * j.rhox);
}

/// ρ_t = −(u ρ_x + ρ u_x) on the system.
template <typename S>
S system_rhot(const Jet<S>& j) {
  return -(j.u * j.rhox + j.rho * j.ux);
}

/// Tangent of D̄_t: (1, 0, u_t, ρ_t, u_tx, ρ_tx, u_txx, ρ_txx, ·, ·), with the
/// prolonged system substituted. Only slots up to `order` are filled; deeper
/// ones are NaN.
template <typename S>
Jet<S> time_direction(const Barotropy& law, const Jet<S>& p, int order) {
  const S nan(std::numeric_limits<double>::quiet_NaN());
  Jet<S> d;
  for (int i = 0; i < Jet<S>::size; ++i) d[i] = nan;
  d.t = S(1.0);
  d.x = S(0.0);
  d.u = system_ut(law, p);
  d.rho = system_rhot(p);
  if (order >= 1) {
    const auto l1 = lift_dx(p);
    d.ux = system_ut(law, l1).d;
    d.rhox = system_rhot(l1).d;
  }
  if (order >= 2) {
    const auto l2 = lift_dx2(p);
    d.uxx = system_ut(law, l2).d.d;
    d.rhoxx = system_rhot(l2).d.d;
  }
  return d;
}

template <typename S>
S total_dx(const JetFunction& f, const Jet<S>& p) {
  if (f.order() >= kMaxJetOrder) throw ValidationError("total_dx: insufficient jet order");
  return f(lift_dx(p)).d;
}

template <typename S>
S total_dt(const JetFunction& f, const Jet<S>& p, const Barotropy& law) {
  if (f.order() >= kMaxJetOrder) throw ValidationError("total_dt: insufficient jet order");
  return f(lift_direction(p, time_direction(law, p, f.order()))).d;
}

template <typename S>
S characteristic_apply(Side side, const JetFunction& f, const Jet<S>& p, const Barotropy& law) {
  const S c = law.sound_speed(p.rho);
  const S speed = side == Side::plus ? p.u + c : p.u - c;
  return total_dt(f, p, law) + speed * total_dx(f, p);
}

/// D̄_x f as a jet function of one order higher.
JetFunction dx_function(const JetFunction& f);

/// X±(f) as a jet function of one order higher.
JetFunction characteristic_function(Side side, const JetFunction& f, const Barotropy& law);

/// (1/r_x) D̄_x(spec) on the plus side, (1/k_x) D̄_x(spec) on the minus side.
/// Throws ValidationError when the result would exceed the jet truncation.
InvariantSpec shift_invariant(const InvariantSpec& spec, const Barotropy& law);

/// Exact partial derivatives with respect to all ten jet coordinates.
std::array<double, JetPoint::size> partials(const JetFunction& f, const JetPoint& p);

struct SampleRanges {
  double t = 2.0, x = 3.0, u = 3.0;  // symmetric half-widths
  double rho_lo = 0.1, rho_hi = 10.0;
  double deriv = 2.0;  // half-width for every x-derivative coordinate
};

struct SampleSet {
  std::vector<JetPoint> points;
  std::size_t attempts = 0;
  std::size_t rejected = 0;
  bool high_rejection = false;  // more than 90% of draws rejected
};

/// Draws n admissible jet points for spec: ρ inside the law's range and every
/// denominator of the evaluator at least kDenominatorGuard in magnitude.
SampleSet sample_jet_points(const InvariantSpec& spec, const Barotropy& law, std::size_t n, std::uint64_t seed,
                            const SampleRanges& ranges = {});

/// max |X f| / (1 + |D̄_x f| + |D̄_t f|) over the samples.
double invariance_residual(const InvariantSpec& spec, const Barotropy& law, const std::vector<JetPoint>& samples);

/// max |X((1/r_x)D̄_x ψ) − (1/r_x)D̄_x(X ψ)| / (1 + |D̄_x g| + |D̄_t g|), g the shifted ψ.
/// ψ must be of order ≤ 1 so that both sides fit the jet truncation.
double commutator_residual(Side side, const JetFunction& psi, const Barotropy& law,
                           const std::vector<JetPoint>& samples);

/// Copy of spec with evaluator f + 0.01·u (no longer an invariant).
InvariantSpec perturb_invariant(const InvariantSpec& spec);

/// u + 1.01·φ(ρ): a near miss of the Riemann invariant r.
InvariantSpec corrupted_riemann(const Barotropy& law);

}  // namespace charflow
