#pragma once

// Initial data for the Riemann invariants, admissibility, monotone inversion
// and the constraint functions h(k), g(r) fixed by the initial curve.

#include <array>
#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "charflow/barotropy.hpp"
#include "charflow/catalog.hpp"
#include "charflow/expr.hpp"
#include "charflow/jet.hpp"
#include "charflow/numerics.hpp"
#include "charflow/snapshot.hpp"

namespace charflow {

struct Window {
  double lo = -60.0, hi = 60.0;
};

struct CauchyData {
  Expr r0, k0;
  // Symbolic derivatives; index j holds the j-th derivative (0..3).
  std::array<Expr, 4> dr, dk;
  Window window;
  std::size_t n = 4001;

  static CauchyData make(const Expr& r0, const Expr& k0, Window window, std::size_t n);
  /// The two problems used throughout: 'a' and 'b'.
  static CauchyData preset(char which, Window window = {}, std::size_t n = 4001);
};

/// Jet of the initial curve at x (t = 0), coordinates through third order.
JetPoint initial_jet(const CauchyData& data, const Barotropy& law, double x);

struct AdmissibilityReport {
  bool pass = false;
  double min_dr0 = 0.0, x_min_dr0 = 0.0;
  double min_dk0 = 0.0, x_min_dk0 = 0.0;
  bool gamma_covered = true;  // the sufficiency result needs −1 < γ ≤ 3
  std::string message;
};

/// Checks r₀′ ≥ 0 and k₀′ ≥ 0 on a 4N-point grid refined by golden-section
/// search around the smallest samples.
AdmissibilityReport check_admissible(const CauchyData& data, const Barotropy* law = nullptr);

/// Inverse of a strictly increasing expression on a window.
class MonotoneInverse {
 public:
  MonotoneInverse(const Expr& f, Window window, std::size_t grid = 4001);
  double operator()(double y) const;
  double y_min() const { return fy_.front(); }
  double y_max() const { return fy_.back(); }

 private:
  Expr f_, df_;
  std::vector<double> x_, fy_;
};

MonotoneInverse monotone_inverse(const Expr& f, Window window);

/// h(k) or g(r): a sampled table with monotone cubic interpolation, an exact
/// evaluator through the inverse of the initial profile, and an optional
/// closed form that takes precedence for evaluation when enabled.
class ConstraintFn {
 public:
  ConstraintFn() = default;
  ConstraintFn(std::vector<double> nodes, std::vector<double> values, std::function<double(double)> exact);

  /// Value used by the solvers: the closed form when set and enabled, else the
  /// table. Arguments beyond the table range are clamped and counted.
  double operator()(double arg) const;

  double table(double arg) const;
  double exact(double arg) const { return exact_(arg); }
  double closed(double arg) const { return closed_->eval(arg); }

  void set_closed_form(const Expr& e, bool prefer = true);
  const std::optional<Expr>& closed_form() const { return closed_; }
  bool uses_closed_form() const { return closed_ && prefer_closed_; }

  double arg_min() const { return nodes_.front(); }
  double arg_max() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

  /// Number of evaluations clamped to the table range so far.
  long clamp_count() const { return clamps_ ? clamps_->load() : 0; }

  void write_csv(const std::string& path, const std::string& arg_name = "k", const std::string& value_name = "h") const;

 private:
  std::vector<double> nodes_, values_;
  std::shared_ptr<const MonotoneCubic> interp_;
  std::function<double(double)> exact_;
  std::optional<Expr> closed_;
  bool prefer_closed_ = true;
  std::shared_ptr<std::atomic<long>> clamps_;
};

/// h = I₋(0, ·) ∘ k₀⁻¹ sampled at the N window nodes.
ConstraintFn determine_h(const CauchyData& data, const Barotropy& law, const InvariantSpec& i_minus);

/// g = I₊(0, ·) ∘ r₀⁻¹ sampled at the N window nodes.
ConstraintFn determine_g(const CauchyData& data, const Barotropy& law, const InvariantSpec& i_plus);

/// (M, P, E) by Simpson quadrature on the snapshot's uniform grid.
Conserved conserved_integrals(const SolutionSnapshot& snap, double gamma);

/// Closed forms of h for the presets, where known (γ = 5/3: a, b; γ = 7/5: a, b).
std::optional<Expr> preset_h(char which, double gamma);

}  // namespace charflow
