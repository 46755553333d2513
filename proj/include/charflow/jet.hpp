#pragma once

// Truncated jet coordinates and functions on them. A JetFunction is stored as
// one instantiation per derivative-nesting depth, so the jet operators can
// differentiate it exactly by evaluating at Dual arguments.

#include <array>
#include <functional>
#include <limits>
#include <string>

#include "charflow/dual.hpp"
#include "charflow/error.hpp"

namespace charflow {

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

inline constexpr int kMaxJetOrder = 3;
inline constexpr int kMaxErasedDepth = 3;

template <typename S>
struct Jet {
  S t{}, x{}, u{}, rho{};
  S ux{}, rhox{};
  S uxx{}, rhoxx{};
  S uxxx{}, rhoxxx{};

  static constexpr int size = 10;
  S& operator[](int i) { return *slot(this, i); }
  const S& operator[](int i) const { return *slot(this, i); }

 private:
  template <typename J>
  static auto slot(J* j, int i) -> decltype(&j->t) {
    switch (i) {
      case 0: return &j->t;
      case 1: return &j->x;
      case 2: return &j->u;
      case 3: return &j->rho;
      case 4: return &j->ux;
      case 5: return &j->rhox;
      case 6: return &j->uxx;
      case 7: return &j->rhoxx;
      case 8: return &j->uxxx;
      default: return &j->rhoxxx;
    }
  }
};

using JetPoint = Jet<double>;

/// Jet order of coordinate slot i (t, x -> 0; u, rho -> 0; u_x, rho_x -> 1; ...).
constexpr int coordinate_order(int i) { return i < 4 ? 0 : (i - 2) / 2; }

const char* coordinate_name(int i);

class JetFunction {
 public:
  JetFunction() = default;

  /// Wraps a generic callable `S f(const Jet<S>&)`. It is instantiated at
  /// double and at Dual nestings up to depth 3; a callable that cannot
  /// support some depth should throw there (guarded with if constexpr).
  template <typename F>
  JetFunction(int order, F f) : order_(order) {
    f0_ = [f](const Jet<double>& j) -> double { return f(j); };
    f1_ = [f](const Jet<D1>& j) -> D1 { return f(j); };
    f2_ = [f](const Jet<D2>& j) -> D2 { return f(j); };
    f3_ = [f](const Jet<D3>& j) -> D3 { return f(j); };
  }

  int order() const { return order_; }
  explicit operator bool() const { return static_cast<bool>(f0_); }

  template <typename S>
  S operator()(const Jet<S>& j) const {
    if constexpr (std::is_same_v<S, double>) {
      return f0_(j);
    } else if constexpr (std::is_same_v<S, D1>) {
      return f1_(j);
    } else if constexpr (std::is_same_v<S, D2>) {
      return f2_(j);
    } else if constexpr (std::is_same_v<S, D3>) {
      return f3_(j);
    } else {
      static_assert(dual_depth_v<S> <= kMaxErasedDepth, "JetFunction nesting depth exceeded");
      return S{};
    }
  }

 private:
  int order_ = 0;
  std::function<double(const Jet<double>&)> f0_;
  std::function<D1(const Jet<D1>&)> f1_;
  std::function<D2(const Jet<D2>&)> f2_;
  std::function<D3(const Jet<D3>&)> f3_;
};

/// Thrown by wrapped callables asked for a nesting depth they cannot provide.
[[noreturn]] inline void depth_exceeded() {
  throw NumericalError("jet function composed beyond the supported derivative depth");
}

/// Lifts a jet point to a derivative-carrying point whose tangent is the
/// D̄_x direction (each coordinate shifted one x-derivative up). Coordinates of
/// order 4, which the truncation does not carry, get a NaN tangent so that any
/// function reading too deep a coordinate yields NaN.
template <typename S>
Jet<Dual<S>> lift_dx(const Jet<S>& p) {
  const S nan(std::numeric_limits<double>::quiet_NaN());
  Jet<Dual<S>> q;
  q.t = {p.t, S(0.0)};
  q.x = {p.x, S(1.0)};
  q.u = {p.u, p.ux};
  q.rho = {p.rho, p.rhox};
  q.ux = {p.ux, p.uxx};
  q.rhox = {p.rhox, p.rhoxx};
  q.uxx = {p.uxx, p.uxxx};
  q.rhoxx = {p.rhoxx, p.rhoxxx};
  q.uxxx = {p.uxxx, nan};
  q.rhoxxx = {p.rhoxxx, nan};
  return q;
}

/// Second-order Taylor lift along D̄_x: value, first and second x-derivatives
/// of every coordinate (for D̄_x² of functions reading at most first order).
template <typename S>
Jet<Dual<Dual<S>>> lift_dx2(const Jet<S>& p) {
  using T = Dual<S>;
  const S nan(std::numeric_limits<double>::quiet_NaN());
  auto tower = [](const S& a, const S& b, const S& c) { return Dual<T>{T{a, b}, T{b, c}}; };
  Jet<Dual<T>> q;
  q.t = tower(p.t, S(0.0), S(0.0));
  q.x = tower(p.x, S(1.0), S(0.0));
  q.u = tower(p.u, p.ux, p.uxx);
  q.rho = tower(p.rho, p.rhox, p.rhoxx);
  q.ux = tower(p.ux, p.uxx, p.uxxx);
  q.rhox = tower(p.rhox, p.rhoxx, p.rhoxxx);
  q.uxx = tower(p.uxx, p.uxxx, nan);
  q.rhoxx = tower(p.rhoxx, p.rhoxxx, nan);
  q.uxxx = tower(p.uxxx, nan, nan);
  q.rhoxxx = tower(p.rhoxxx, nan, nan);
  return q;
}

/// Jet point lifted with an arbitrary tangent direction.
template <typename S>
Jet<Dual<S>> lift_direction(const Jet<S>& p, const Jet<S>& dir) {
  Jet<Dual<S>> q;
  for (int i = 0; i < Jet<S>::size; ++i) q[i] = Dual<S>{p[i], dir[i]};
  return q;
}

}  // namespace charflow
