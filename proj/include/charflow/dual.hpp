#pragma once

// Forward-mode derivative-carrying scalar. Dual<T> carries a value and one
// directional derivative; nesting Dual<Dual<T>> gives higher derivatives.

#include <cmath>
#include <limits>
#include <type_traits>

namespace charflow {

using std::abs;
using std::atan;
using std::cbrt;
using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tan;
using std::tanh;

template <typename T>
struct Dual {
  using value_type = T;

  T v{};
  T d{};

  Dual() = default;
  Dual(double value) : v(value), d(0.0) {}  // NOLINT(google-explicit-constructor)
  Dual(T value, T tangent) : v(std::move(value)), d(std::move(tangent)) {}

  template <typename U = T, typename = std::enable_if_t<!std::is_same_v<U, double>>>
  Dual(const T& value) : v(value), d(0.0) {}  // NOLINT(google-explicit-constructor)

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
};

template <typename T>
struct is_dual : std::false_type {};
template <typename T>
struct is_dual<Dual<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Nesting depth: 0 for double, 1 for Dual<double>, ...
template <typename T>
struct dual_depth : std::integral_constant<int, 0> {};
template <typename T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};
template <typename T>
inline constexpr int dual_depth_v = dual_depth<T>::value;

inline double value_of(double x) { return x; }
template <typename T>
double value_of(const Dual<T>& x) { return value_of(x.v); }

template <typename T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <typename T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <typename T>
Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <typename T>
Dual<T> operator+(const Dual<T>& a) { return a; }
template <typename T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <typename T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}

template <typename T>
Dual<T> operator+(const Dual<T>& a, double b) { return {a.v + b, a.d}; }
template <typename T>
Dual<T> operator+(double a, const Dual<T>& b) { return {a + b.v, b.d}; }
template <typename T>
Dual<T> operator-(const Dual<T>& a, double b) { return {a.v - b, a.d}; }
template <typename T>
Dual<T> operator-(double a, const Dual<T>& b) { return {a - b.v, -b.d}; }
template <typename T>
Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <typename T>
Dual<T> operator*(double a, const Dual<T>& b) { return {a * b.v, a * b.d}; }
template <typename T>
Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }
template <typename T>
Dual<T> operator/(double a, const Dual<T>& b) {
  T q = a / b.v;
  return {q, -q * b.d / b.v};
}

// Comparisons look at the value only.
template <typename T>
bool operator<(const Dual<T>& a, const Dual<T>& b) { return value_of(a) < value_of(b); }
template <typename T>
bool operator>(const Dual<T>& a, const Dual<T>& b) { return value_of(a) > value_of(b); }
template <typename T>
bool operator<(const Dual<T>& a, double b) { return value_of(a) < b; }
template <typename T>
bool operator>(const Dual<T>& a, double b) { return value_of(a) > b; }

template <typename T>
Dual<T> sin(const Dual<T>& a) { return {sin(a.v), cos(a.v) * a.d}; }
template <typename T>
Dual<T> cos(const Dual<T>& a) { return {cos(a.v), -sin(a.v) * a.d}; }
template <typename T>
Dual<T> tan(const Dual<T>& a) {
  T t = tan(a.v);
  return {t, (1.0 + t * t) * a.d};
}
template <typename T>
Dual<T> atan(const Dual<T>& a) { return {atan(a.v), a.d / (1.0 + a.v * a.v)}; }
template <typename T>
Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, e * a.d};
}
template <typename T>
Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }
template <typename T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <typename T>
Dual<T> cbrt(const Dual<T>& a) {
  T c = cbrt(a.v);
  return {c, a.d / (3.0 * c * c)};
}
template <typename T>
Dual<T> sinh(const Dual<T>& a) { return {sinh(a.v), cosh(a.v) * a.d}; }
template <typename T>
Dual<T> cosh(const Dual<T>& a) { return {cosh(a.v), sinh(a.v) * a.d}; }
template <typename T>
Dual<T> tanh(const Dual<T>& a) {
  T t = tanh(a.v);
  return {t, (1.0 - t * t) * a.d};
}
template <typename T>
Dual<T> pow(const Dual<T>& a, double e) {
  if (e == 0.0) return Dual<T>(1.0);
  return {pow(a.v, e), e * pow(a.v, e - 1.0) * a.d};
}
template <typename T>
Dual<T> abs(const Dual<T>& a) { return value_of(a) < 0.0 ? -a : a; }

/// Integer power by repeated multiplication (exact for negative bases).
template <typename S>
S ipow(const S& x, int n) {
  if (n < 0) return 1.0 / ipow(x, -n);
  S result(1.0);
  S base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

/// Builds the nested dual encoding of a truncated Taylor jet: given f, f', ..., f^(n)
/// at a point, returns the depth-n dual whose successive tangents are those derivatives.
template <int N>
struct TaylorJet;

template <>
struct TaylorJet<0> {
  using type = double;
  static type make(const double* derivs) { return derivs[0]; }
};

template <int N>
struct TaylorJet {
  using inner = TaylorJet<N - 1>;
  using type = Dual<typename inner::type>;
  static type make(const double* derivs) { return {inner::make(derivs), inner::make(derivs + 1)}; }
};

/// j-th derivative stored in a Taylor-jet dual built by TaylorJet.
template <typename S>
double taylor_coefficient(const S& x, int j) {
  if constexpr (is_dual_v<S>) {
    return j == 0 ? taylor_coefficient(x.v, 0) : taylor_coefficient(x.d, j - 1);
  } else {
    return j == 0 ? x : std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace charflow
