#include "charflow/barotropy.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "charflow/numerics.hpp"

namespace charflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

Barotropy Barotropy::polytropic(double gamma) {
  if (!std::isfinite(gamma) || gamma == 1.0) throw ValidationError("polytropic law needs a finite gamma != 1");
  return Barotropy(Polytropic{gamma});
}

Barotropy Barotropy::case2(double C) {
  if (!std::isfinite(C)) throw ValidationError("Case2 constant must be finite");
  return Barotropy(Case2{C});
}

Barotropy Barotropy::case3(double C) {
  if (!std::isfinite(C)) throw ValidationError("Case3 constant must be finite");
  return Barotropy(Case3{C});
}

Barotropy Barotropy::case4(double C1, double C2, double branch_ref_rho,
                           std::optional<std::pair<double, double>> phi_bracket) {
  if (!(C1 > 0.0) || C2 == 0.0 || !std::isfinite(C2)) throw ValidationError("Case4 needs C1 > 0 and C2 != 0");
  Barotropy b(Case4{C1, C2});
  b.select_branch(branch_ref_rho, phi_bracket);
  return b;
}

Barotropy Barotropy::case5(double C1, double C2, double branch_ref_rho,
                           std::optional<std::pair<double, double>> phi_bracket) {
  if (!(C1 > 0.0) || !std::isfinite(C2)) throw ValidationError("Case5 needs C1 > 0 and finite C2");
  Barotropy b(Case5{C1, C2});
  b.select_branch(branch_ref_rho, phi_bracket);
  return b;
}

std::string Barotropy::name() const {
  return std::visit(
      [](const auto& l) -> std::string {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Polytropic>) return "polytropic(gamma=" + fmt(l.gamma) + ")";
        else if constexpr (std::is_same_v<L, Case2>) return "case2(C=" + fmt(l.C) + ")";
        else if constexpr (std::is_same_v<L, Case3>) return "case3(C=" + fmt(l.C) + ")";
        else if constexpr (std::is_same_v<L, Case4>) return "case4(C1=" + fmt(l.C1) + ",C2=" + fmt(l.C2) + ")";
        else return "case5(C1=" + fmt(l.C1) + ",C2=" + fmt(l.C2) + ")";
      },
      law_);
}

std::optional<double> Barotropy::gamma() const {
  if (const auto* p = std::get_if<Polytropic>(&law_)) return p->gamma;
  return std::nullopt;
}

std::optional<double> Barotropy::classified_gamma() const {
  const auto g = gamma();
  if (!g) return std::nullopt;
  for (double known : {3.0, 5.0 / 3.0, 7.0 / 5.0, 1.0 / 3.0}) {
    if (std::abs(*g - known) <= 1e-12) return known;
  }
  return std::nullopt;
}

std::pair<double, double> Barotropy::rho_range() const {
  return std::visit(
      [&](const auto& l) -> std::pair<double, double> {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Polytropic>) return {0.0, kInf};
        else if constexpr (std::is_same_v<L, Case2> || std::is_same_v<L, Case3>) return {std::max(0.0, -l.C), kInf};
        else return {std::max(0.0, branch_->rho_lo), branch_->rho_hi};
      },
      law_);
}

void Barotropy::check_rho(double rho) const {
  const auto [lo, hi] = rho_range();
  if (!(rho > lo && rho < hi)) {
    throw DomainError("density " + fmt(rho) + " outside the admissible range of " + name());
  }
}

double Barotropy::implicit_phi_value(double rho) const {
  if (!(rho > branch_->rho_lo && rho < branch_->rho_hi)) {
    throw DomainError("density " + fmt(rho) + " outside the selected branch of " + name());
  }
  auto f = [&](double p) { return implicit_rho(p) - rho; };
  auto df = [&](double p) { return implicit_rho(Dual<double>{p, 1.0}).d; };
  return solve_bracketed(f, df, branch_->phi_lo, branch_->phi_hi, 1e-15);
}

void Barotropy::select_branch(double ref, std::optional<std::pair<double, double>> bracket) {
  const double lo = bracket ? bracket->first : -20.0;
  const double hi = bracket ? bracket->second : 20.0;
  if (!(hi > lo)) throw ValidationError("phi_bracket must be an increasing pair");
  const std::size_t n = 40001;
  const std::vector<double> grid = linspace(lo, hi, n);
  std::vector<double> R(n);
  for (std::size_t i = 0; i < n; ++i) R[i] = implicit_rho(grid[i]);

  struct Candidate {
    PhiBranch branch;
    double root;
  };
  std::vector<Candidate> found;
  std::size_t i = 0;
  while (i + 1 < n) {
    if (!std::isfinite(R[i]) || !(R[i + 1] > R[i]) || !std::isfinite(R[i + 1])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j + 1 < n && std::isfinite(R[j + 1]) && R[j + 1] > R[j]) ++j;
    if (ref > R[i] && ref < R[j]) {
      PhiBranch b{grid[i], grid[j], R[i], R[j]};
      auto f = [&](double p) { return implicit_rho(p) - ref; };
      found.push_back({b, solve_bracketed(f, nullptr, b.phi_lo, b.phi_hi, 1e-15)});
    }
    i = j;
  }
  if (found.empty()) {
    throw ValidationError("no increasing branch of " + name() + " contains branch_ref_rho=" + fmt(ref));
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < found.size(); ++c) {
    if (std::abs(found[c].root) < std::abs(found[best].root)) best = c;
  }
  for (std::size_t c = 0; c < found.size(); ++c) {
    if (c != best && std::abs(std::abs(found[c].root) - std::abs(found[best].root)) < 1e-9) {
      throw ValidationError("branch ambiguity for " + name() + ": supply phi_bracket");
    }
  }
  branch_ = std::make_shared<PhiBranch>(found[best].branch);
  pressure_ref_rho_ = ref;
}

double Barotropy::pressure(double rho) const {
  check_rho(rho);
  return std::visit(
      [&](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Polytropic>) {
          return std::pow(rho, l.gamma) / l.gamma;
        } else if constexpr (std::is_same_v<L, Case2>) {
          const double s = rho + l.C;
          return -(3 * rho * rho + 3 * l.C * rho + l.C * l.C) / (3 * s * s * s);
        } else if constexpr (std::is_same_v<L, Case3>) {
          return 0.6 * (rho * rho - 3 * l.C * rho - 9 * l.C * l.C) / std::cbrt(rho + l.C);
        } else {
          // No closed form: p(ρ) = ∫ c² dρ with the gauge p(branch_ref_rho) = 0.
          auto c2 = [&](double s) {
            const double c = sound_speed(s);
            return c * c;
          };
          return gauss_legendre(c2, pressure_ref_rho_, rho, 16);
        }
      },
      law_);
}

RiemannPair Barotropy::riemann_from_state(double u, double rho) const {
  if (!(rho >= rho_min_)) throw DomainError("density below the vacuum threshold");
  const double f = phi(rho);
  return {u + f, u - f};
}

GasState Barotropy::state_from_riemann(double r, double k) const {
  if (r == k) throw DomainError("r == k: vacuum state");
  const double rho = phi_inverse(0.5 * (r - k));
  if (!(rho >= rho_min_)) throw DomainError("density below the vacuum threshold");
  check_rho(rho);
  return {0.5 * (r + k), rho};
}

}  // namespace charflow
