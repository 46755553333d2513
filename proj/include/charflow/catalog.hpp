#pragma once

// Catalogued invariants of characteristics for the classified laws.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "charflow/barotropy.hpp"
#include "charflow/jet.hpp"

namespace charflow {

enum class Side { plus, minus };

const char* side_name(Side s);  // "+" or "-"

/// Sample points whose guard value is below this are rejected.
inline constexpr double kDenominatorGuard = 1e-6;

struct InvariantSpec {
  std::string name;        // e.g. "Riemann.r", "Case3.I", "G75.I"
  Side side = Side::plus;  // annihilated by X+ or X-
  int order = 0;           // highest jet coordinate read
  int required_jet_order = 1;
  JetFunction f;
  /// Smallest |denominator| of the evaluator at a point (+inf if it has none).
  std::function<double(const JetPoint&)> guard;

  std::string label() const { return name + side_name(side); }
};

/// Riemann invariants plus the additional invariants of the law's case, both
/// sides. Unclassified polytropic exponents give {r, k} only.
std::vector<InvariantSpec> catalog(const Barotropy& law);

/// Entry with the given name and side; throws ValidationError if missing.
const InvariantSpec& find_invariant(const std::vector<InvariantSpec>& cat, std::string_view name, Side side);

InvariantSpec riemann_r(const Barotropy& law);
InvariantSpec riemann_k(const Barotropy& law);

/// Riemann variables and their x-derivatives evaluated on a jet point.
template <typename S>
struct RiemannJet {
  S r, k, rx, kx, rxx, kxx;
};

template <typename S>
RiemannJet<S> riemann_jet(const Barotropy& law, const Jet<S>& j) {
  using T = Dual<S>;
  const Dual<T> lifted = law.phi(Dual<T>{T{j.rho, S(1.0)}, T{S(1.0), S(0.0)}});
  const S f = lifted.v.v, f1 = lifted.v.d, f2 = lifted.d.d;
  const S phix = f1 * j.rhox;
  const S phixx = f2 * j.rhox * j.rhox + f1 * j.rhoxx;
  return {j.u + f, j.u - f, j.ux + phix, j.ux - phix, j.uxx + phixx, j.uxx - phixx};
}

}  // namespace charflow
