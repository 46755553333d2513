#include "charflow/jets.hpp"

#include <algorithm>
#include <cmath>

#include "charflow/numerics.hpp"

namespace charflow {

const char* coordinate_name(int i) {
  static constexpr const char* names[] = {"t", "x", "u", "rho", "u_x", "rho_x", "u_xx", "rho_xx", "u_xxx", "rho_xxx"};
  return (i >= 0 && i < JetPoint::size) ? names[i] : "?";
}

JetFunction dx_function(const JetFunction& f) {
  return JetFunction(f.order() + 1, [f](const auto& j) {
    using S = std::decay_t<decltype(j.t)>;
    if constexpr (dual_depth_v<S> < kMaxErasedDepth) {
      return total_dx(f, j);
    } else {
      depth_exceeded();
      return S{};
    }
  });
}

JetFunction characteristic_function(Side side, const JetFunction& f, const Barotropy& law) {
  return JetFunction(f.order() + 1, [side, f, law](const auto& j) {
    using S = std::decay_t<decltype(j.t)>;
    if constexpr (dual_depth_v<S> < kMaxErasedDepth) {
      return characteristic_apply(side, f, j, law);
    } else {
      depth_exceeded();
      return S{};
    }
  });
}

InvariantSpec shift_invariant(const InvariantSpec& spec, const Barotropy& law) {
  if (spec.order >= 2) throw ValidationError("shift of " + spec.label() + " would exceed the jet truncation");
  const Side side = spec.side;
  const JetFunction f = spec.f;
  InvariantSpec out;
  out.name = "shift(" + spec.name + ")";
  out.side = side;
  out.order = spec.order + 1;
  out.required_jet_order = out.order + 1;
  out.f = JetFunction(out.order, [side, f, law](const auto& j) {
    using S = std::decay_t<decltype(j.t)>;
    if constexpr (dual_depth_v<S> < kMaxErasedDepth) {
      const auto q = riemann_jet(law, j);
      return total_dx(f, j) / (side == Side::plus ? q.rx : q.kx);
    } else {
      depth_exceeded();
      return S{};
    }
  });
  const auto inner_guard = spec.guard;
  out.guard = [side, law, inner_guard](const JetPoint& j) {
    const auto q = riemann_jet(law, j);
    const double own = std::abs(side == Side::plus ? q.rx : q.kx);
    return inner_guard ? std::min(own, inner_guard(j)) : own;
  };
  return out;
}

std::array<double, JetPoint::size> partials(const JetFunction& f, const JetPoint& p) {
  std::array<double, JetPoint::size> out{};
  for (int i = 0; i < JetPoint::size; ++i) {
    JetPoint dir;
    dir[i] = 1.0;
    out[i] = f(lift_direction(p, dir)).d;
  }
  return out;
}

SampleSet sample_jet_points(const InvariantSpec& spec, const Barotropy& law, std::size_t n, std::uint64_t seed,
                            const SampleRanges& ranges) {
  SampleSet set;
  SampleRng rng(seed);
  const auto [law_lo, law_hi] = law.rho_range();
  const double rho_lo = std::max(ranges.rho_lo, law_lo);
  const double rho_hi = std::min(ranges.rho_hi, law_hi);
  if (!(rho_hi > rho_lo)) throw ValidationError("sample density range is empty for " + law.name());
  const std::size_t max_attempts = 1000 * std::max<std::size_t>(n, 1);
  while (set.points.size() < n) {
    if (set.attempts >= max_attempts) {
      throw NumericalError("could not draw admissible jet points for " + spec.label());
    }
    ++set.attempts;
    JetPoint p;
    p.t = rng.uniform(-ranges.t, ranges.t);
    p.x = rng.uniform(-ranges.x, ranges.x);
    p.u = rng.uniform(-ranges.u, ranges.u);
    p.rho = rng.uniform(rho_lo, rho_hi);
    for (int i = 4; i < JetPoint::size; ++i) p[i] = rng.uniform(-ranges.deriv, ranges.deriv);
    // Keep away from the open ends of the density range, where φ′ may blow up.
    const bool rho_ok = p.rho > law_lo * (1 + 1e-9) + 1e-12 && p.rho < law_hi;
    if (!rho_ok || !(spec.guard(p) >= kDenominatorGuard)) {
      ++set.rejected;
      continue;
    }
    set.points.push_back(p);
  }
  set.high_rejection = set.rejected * 10 > set.attempts * 9;
  return set;
}

double invariance_residual(const InvariantSpec& spec, const Barotropy& law, const std::vector<JetPoint>& samples) {
  double worst = 0.0;
  for (const auto& p : samples) {
    const double dx = total_dx(spec.f, p);
    const double dt = total_dt(spec.f, p, law);
    const double c = law.sound_speed(p.rho);
    const double speed = spec.side == Side::plus ? p.u + c : p.u - c;
    const double x = dt + speed * dx;
    const double r = std::abs(x) / (1.0 + std::abs(dx) + std::abs(dt));
    worst = std::isnan(r) ? std::numeric_limits<double>::infinity() : std::max(worst, r);
  }
  return worst;
}

double commutator_residual(Side side, const JetFunction& psi, const Barotropy& law,
                           const std::vector<JetPoint>& samples) {
  if (psi.order() > 1) throw ValidationError("commutator check needs a function of order <= 1");
  InvariantSpec wrapped;
  wrapped.name = "psi";
  wrapped.side = side;
  wrapped.order = psi.order();
  wrapped.f = psi;
  const InvariantSpec shifted = shift_invariant(wrapped, law);
  const JetFunction x_psi = characteristic_function(side, psi, law);
  double worst = 0.0;
  for (const auto& p : samples) {
    const double lhs = characteristic_apply(side, shifted.f, p, law);
    const auto q = riemann_jet(law, p);
    const double rhs = total_dx(x_psi, p) / (side == Side::plus ? q.rx : q.kx);
    const double scale = 1.0 + std::abs(total_dx(shifted.f, p)) + std::abs(total_dt(shifted.f, p, law));
    const double r = std::abs(lhs - rhs) / scale;
    worst = std::isnan(r) ? std::numeric_limits<double>::infinity() : std::max(worst, r);
  }
  return worst;
}

InvariantSpec perturb_invariant(const InvariantSpec& spec) {
  InvariantSpec out = spec;
  out.name = spec.name + "~";
  const JetFunction f = spec.f;
  out.f = JetFunction(spec.order, [f](const auto& j) { return f(j) + 0.01 * j.u; });
  return out;
}

InvariantSpec corrupted_riemann(const Barotropy& law) {
  InvariantSpec out = riemann_r(law);
  out.name = "Riemann.r~";
  out.f = JetFunction(0, [law](const auto& j) { return j.u + 1.01 * law.phi(j.rho); });
  return out;
}

}  // namespace charflow
