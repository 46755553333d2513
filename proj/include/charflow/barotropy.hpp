#pragma once

// Equations of state p = p(ρ) and the map φ(ρ) = ∫ c/ρ dρ behind the Riemann
// invariants r = u + φ(ρ), k = u − φ(ρ).
//
// The laws with explicit φ are evaluated directly. The two implicit laws
// (Case4, Case5) are handled through their explicit inverse ρ = R(φ): φ(ρ) is
// the root of R(φ) = ρ on one monotone branch of R, fixed at construction.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "charflow/dual.hpp"
#include "charflow/error.hpp"

namespace charflow {

struct Polytropic {
  double gamma;
};
struct Case2 {
  double C;
};
struct Case3 {
  double C;
};
struct Case4 {
  double C1, C2;
};
struct Case5 {
  double C1, C2;
};

struct RiemannPair {
  double r, k;
};
struct GasState {
  double u, rho;
};

/// Monotone branch of an implicit law: φ ∈ (phi_lo, phi_hi) maps onto ρ ∈ (rho_lo, rho_hi).
struct PhiBranch {
  double phi_lo, phi_hi;
  double rho_lo, rho_hi;
};

class Barotropy {
 public:
  using Law = std::variant<Polytropic, Case2, Case3, Case4, Case5>;

  static Barotropy polytropic(double gamma);
  static Barotropy case2(double C);
  static Barotropy case3(double C);
  /// branch_ref_rho selects the branch; phi_bracket, when given, restricts the search to it.
  static Barotropy case4(double C1, double C2, double branch_ref_rho = 1.0,
                         std::optional<std::pair<double, double>> phi_bracket = std::nullopt);
  static Barotropy case5(double C1, double C2, double branch_ref_rho = 1.0,
                         std::optional<std::pair<double, double>> phi_bracket = std::nullopt);

  const Law& law() const { return law_; }
  std::string name() const;

  /// γ for polytropic laws.
  std::optional<double> gamma() const;

  /// Catalogued polytropic exponent (3, 5/3, 7/5 or 1/3) within 1e-12, if any.
  std::optional<double> classified_gamma() const;

  /// Open density interval on which φ is defined and increasing.
  std::pair<double, double> rho_range() const;

  /// States with ρ below this are treated as vacuum by the state transforms.
  double rho_min() const { return rho_min_; }
  void set_rho_min(double v) { rho_min_ = v; }

  template <typename S>
  S phi(const S& rho) const;

  /// ρ = φ⁻¹(φ); throws DomainError outside the range of φ.
  template <typename S>
  S phi_inverse(const S& phi_value) const;

  /// c = ρ φ′(ρ).
  template <typename S>
  S sound_speed(const S& rho) const {
    return rho * dphi(rho);
  }

  /// φ′(ρ).
  template <typename S>
  S dphi(const S& rho) const {
    return phi(Dual<S>{rho, S(1.0)}).d;
  }

  /// φ″(ρ).
  template <typename S>
  S d2phi(const S& rho) const {
    using T = Dual<S>;
    return phi(Dual<T>{T{rho, S(1.0)}, T{S(1.0), S(0.0)}}).d.d;
  }

  double pressure(double rho) const;

  RiemannPair riemann_from_state(double u, double rho) const;
  GasState state_from_riemann(double r, double k) const;

  /// Branch data of an implicit law.
  const PhiBranch* branch() const { return branch_.get(); }

 private:
  explicit Barotropy(Law law) : law_(std::move(law)) {}
  void check_rho(double rho) const;

  template <typename S>
  S implicit_phi(const S& rho) const;
  double implicit_phi_value(double rho) const;

  template <typename S>
  S implicit_rho(const S& phi_value) const;

  void select_branch(double branch_ref_rho, std::optional<std::pair<double, double>> phi_bracket);

  Law law_;
  std::shared_ptr<const PhiBranch> branch_;
  double rho_min_ = 0.0;
  double pressure_ref_rho_ = 1.0;
};

template <typename S>
S Barotropy::implicit_rho(const S& f) const {
  if (const auto* c4 = std::get_if<Case4>(&law_)) {
    const S em = exp(-f), ep = exp(f);
    return ((f + 1.0) * em + c4->C2 * (f - 1.0) * ep) / (c4->C1 * (em + c4->C2 * ep));
  }
  const auto& c5 = std::get<Case5>(law_);
  const S s = sin(f), c = cos(f);
  return ((c5.C2 * f + 1.0) * s + (c5.C2 - f) * c) / (c5.C1 * (c - c5.C2 * s));
}

template <typename S>
S Barotropy::implicit_phi(const S& rho) const {
  if constexpr (is_dual_v<S>) {
    using T = typename S::value_type;
    const T inner = implicit_phi(rho.v);
    const T drho_dphi = implicit_rho(Dual<T>{inner, T(1.0)}).d;
    return S{inner, rho.d / drho_dphi};
  } else {
    return implicit_phi_value(rho);
  }
}

template <typename S>
S Barotropy::phi(const S& rho) const {
  if constexpr (!is_dual_v<S>) check_rho(rho);
  return std::visit(
      [&](const auto& l) -> S {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Polytropic>) {
          return 2.0 / (l.gamma - 1.0) * pow(rho, 0.5 * (l.gamma - 1.0));
        } else if constexpr (std::is_same_v<L, Case2>) {
          return -1.0 / (rho + l.C);
        } else if constexpr (std::is_same_v<L, Case3>) {
          return 3.0 * cbrt(rho + l.C);
        } else {
          return implicit_phi(rho);
        }
      },
      law_);
}

template <typename S>
S Barotropy::phi_inverse(const S& f) const {
  const double fv = value_of(f);
  return std::visit(
      [&](const auto& l) -> S {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Polytropic>) {
          const double base = 0.5 * (l.gamma - 1.0) * fv;
          if (!(base > 0.0)) throw DomainError("phi value outside the range of the polytropic law");
          return pow(0.5 * (l.gamma - 1.0) * f, 2.0 / (l.gamma - 1.0));
        } else if constexpr (std::is_same_v<L, Case2>) {
          if (!(fv < 0.0)) throw DomainError("phi value outside the range of the Case2 law");
          return -1.0 / f - l.C;
        } else if constexpr (std::is_same_v<L, Case3>) {
          const S third = f / 3.0;
          return third * third * third - l.C;
        } else {
          if (!(fv > branch_->phi_lo && fv < branch_->phi_hi))
            throw DomainError("phi value outside the selected implicit branch");
          return implicit_rho(f);
        }
      },
      law_);
}

}  // namespace charflow
