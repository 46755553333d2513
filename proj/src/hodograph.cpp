#include "charflow/hodograph.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <tuple>

#include "charflow/dual.hpp"
#include "charflow/error.hpp"
#include "charflow/io.hpp"
#include "charflow/numerics.hpp"

namespace charflow {

namespace {

template <typename S>
std::array<S, 2> gensol(const S& r, const S& k, const S& f1, const S& f1p, const S& f2, const S& f2p) {
  const S d = k - r;
  const S sum = f1 + f2;
  const S t = 108.0 / (d * d) * (f1p - f2p + 2.0 * sum / d);
  const S x = 36.0 / (d * d) * ((2.0 * k + r) * f1p - (k + 2.0 * r) * f2p + 3.0 * (r + k) * sum / d);
  return {t, x};
}

void check_distinct(double r, double k) {
  if (r == k) throw DomainError("gensol is singular at r = k (" + format_double(r) + ")");
}

using D1 = Dual<double>;
using D2 = Dual<D1>;

template <typename S>
S r0_case_a(const S& x) {
  return (x * x * x + x + 1.0) / (1.0 + x * x);
}

template <typename S>
S f1_identity_rhs(const S& x) {
  using std::atan;
  using std::log;
  const S q = 1.0 + x * x;
  return r0_case_a(x) / 36.0 * (atan(x) - x / q) - log(q) / 72.0 - x * x * x / 108.0;
}

Deriv2 derivs(const D2& v) { return {v.v.v, v.v.d, v.d.d}; }

D2 seed2(double x) { return D2(D1(x, 1.0), D1(1.0, 0.0)); }

}  // namespace

TimePlace gensol_map(const HodographPair& p, double r, double k) {
  check_distinct(r, k);
  const Deriv2 a = p.f1(r), b = p.f2(k);
  const auto out = gensol(r, k, a.v, a.d1, b.v, b.d1);
  return {out[0], out[1]};
}

Eigen::Matrix2d gensol_jacobian(const HodographPair& p, double r, double k) {
  check_distinct(r, k);
  const Deriv2 a = p.f1(r), b = p.f2(k);
  const auto dr = gensol(D1(r, 1.0), D1(k, 0.0), D1(a.v, a.d1), D1(a.d1, a.d2), D1(b.v, 0.0), D1(b.d1, 0.0));
  const auto dk = gensol(D1(r, 0.0), D1(k, 1.0), D1(a.v, 0.0), D1(a.d1, 0.0), D1(b.v, b.d1), D1(b.d1, b.d2));
  Eigen::Matrix2d j;
  j << dr[0].d, dk[0].d, dr[1].d, dk[1].d;
  return j;
}

Deriv2 f2_case_a(double k) {
  const double q = 1.0 + k * k;
  return {k * k * k / 108.0 - k * std::atan(k) / 36.0 + std::log(q) / 72.0, (k * k - std::atan(k)) / 36.0,
          (k - 0.5 / q) / 18.0};
}

double x_of_r_case_a(double r) {
  const double rad = 12.0 * (r * r * r * r - r * r * r + 2.0 * r * r - 9.0 * r) + 93.0;
  if (rad < 0.0) throw DomainError("x(r) radicand is negative at r=" + format_double(r));
  const double base = r * r * r + 9.0 * r - 13.5, root = 1.5 * std::sqrt(rad);
  double x = (r + std::cbrt(base + root) + std::cbrt(base - root)) / 3.0;
  // Cardano loses digits when s₊ and s₋ nearly cancel; polish on r₀(x) = r.
  for (int i = 0; i < 3; ++i) {
    const D1 v = r0_case_a(D1(x, 1.0));
    if (v.d <= 0.0) break;
    x -= (v.v - r) / v.d;
  }
  return x;
}

Deriv2 f1_case_a(double r) {
  const double x = x_of_r_case_a(r);
  const Deriv2 F = derivs(f1_identity_rhs(seed2(x)));
  const Deriv2 R = derivs(r0_case_a(seed2(x)));
  const double d1 = F.d1 / R.d1;
  return {F.v, d1, (F.d2 - d1 * R.d2) / (R.d1 * R.d1)};
}

HodographPair pair_case_a() { return {f1_case_a, f2_case_a}; }

HodographFn f2_from_h(const Constraint& h, double k_lo, double k_hi, double k_anchor, std::size_t nodes) {
  if (!(k_hi > k_lo) || nodes < 2) throw ValidationError("f2_from_h needs k_lo < k_hi and two nodes");
  if (k_anchor < k_lo || k_anchor > k_hi) throw ValidationError("f2 anchor lies outside [k_lo, k_hi]");
  auto curvature = [h](double s) {
    const double v = h(s);
    if (!std::isfinite(v)) throw DomainError("h is not finite at k=" + format_double(s));
    return v / 18.0;
  };
  // Taylor's formula with integral remainder, exact up to the quadrature.
  auto advance = [curvature](double k0, double f0, double fp0, double k) {
    const double fp = fp0 + gauss_legendre(curvature, k0, k, 2);
    const double f = f0 + fp0 * (k - k0) + gauss_legendre([&](double s) { return (k - s) * curvature(s); }, k0, k, 2);
    return std::pair{f, fp};
  };
  auto grid = std::make_shared<std::vector<double>>(linspace(k_lo, k_hi, nodes));
  auto f = std::make_shared<std::vector<double>>(nodes), fp = std::make_shared<std::vector<double>>(nodes);
  const auto above = static_cast<std::size_t>(std::upper_bound(grid->begin(), grid->end(), k_anchor) - grid->begin());
  double kc = k_anchor, fc = 0.0, fpc = 0.0;
  for (std::size_t i = above; i < nodes; ++i) {
    std::tie(fc, fpc) = advance(kc, fc, fpc, (*grid)[i]);
    kc = (*grid)[i];
    (*f)[i] = fc;
    (*fp)[i] = fpc;
  }
  kc = k_anchor, fc = 0.0, fpc = 0.0;
  for (std::size_t i = above; i-- > 0;) {
    std::tie(fc, fpc) = advance(kc, fc, fpc, (*grid)[i]);
    kc = (*grid)[i];
    (*f)[i] = fc;
    (*fp)[i] = fpc;
  }
  const double step = (k_hi - k_lo) / static_cast<double>(nodes - 1);
  return [=](double k) {
    if (!(k >= k_lo && k <= k_hi)) {
      throw DomainError("f2 requested at k=" + format_double(k) + " outside the range of h");
    }
    const auto i = std::min(static_cast<std::size_t>((k - k_lo) / step), nodes - 1);
    const auto [v, d1] = advance((*grid)[i], (*f)[i], (*fp)[i], k);
    return Deriv2{v, d1, curvature(k)};
  };
}

HodographPair gauge_shift(const HodographPair& p, double c1, double c2) {
  auto f1 = [f = p.f1, c1, c2](double r) {
    Deriv2 d = f(r);
    d.v -= c1 * r + c2;
    d.d1 -= c1;
    return d;
  };
  auto f2 = [f = p.f2, c1, c2](double k) {
    Deriv2 d = f(k);
    d.v += c1 * k + c2;
    d.d1 += c1;
    return d;
  };
  return {f1, f2};
}

InvertResult gensol_invert(const HodographPair& p, double t, double x, RiemannPair guess, const InvertOptions& opt) {
  check_distinct(guess.r, guess.k);
  const double scale = 1.0 + std::abs(t) + std::abs(x);
  const double side = guess.k - guess.r > 0.0 ? 1.0 : -1.0;
  Eigen::Vector2d z(guess.r, guess.k);
  auto residual = [&](const Eigen::Vector2d& w) {
    const TimePlace m = gensol_map(p, w[0], w[1]);
    return Eigen::Vector2d(m.t - t, m.x - x);
  };
  Eigen::Vector2d F = residual(z);
  InvertResult res;
  for (int it = 0;; ++it) {
    res.iterations = it;
    res.residual = F.norm() / scale;
    if (res.residual <= opt.tol) break;
    if (it == opt.max_iter) {
      throw NumericalError("gensol_invert: no convergence in " + std::to_string(opt.max_iter) +
                           " iterations at t=" + format_double(t) + ", x=" + format_double(x) +
                           " (residual " + format_double(res.residual) + ")");
    }
    const Eigen::Matrix2d J = gensol_jacobian(p, z[0], z[1]);
    if (!(std::abs(J.determinant()) > 1e-14 * J.squaredNorm())) {
      throw NumericalError("gensol_invert: singular Jacobian at r=" + format_double(z[0]) + ", k=" +
                           format_double(z[1]));
    }
    const Eigen::Vector2d dz = J.partialPivLu().solve(-F);
    bool accepted = false;
    for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
      const Eigen::Vector2d trial = z + lambda * dz;
      if (!((trial[1] - trial[0]) * side > 0.0)) continue;
      Eigen::Vector2d Ft;
      try {
        Ft = residual(trial);
      } catch (const DomainError&) {
        continue;
      }
      if (Ft.allFinite() && Ft.norm() < F.norm()) {
        z = trial;
        F = Ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NumericalError("gensol_invert: line search stalled at t=" + format_double(t) + ", x=" + format_double(x) +
                           " (residual " + format_double(F.norm() / scale) + ")");
    }
  }
  res.r = z[0];
  res.k = z[1];
  return res;
}

HodographSweep hodograph_solve(const HodographPair& p, const CauchyData& data, const Barotropy& law, double t,
                               const std::vector<double>& xs, int time_steps, const InvertOptions& opt) {
  if (xs.empty()) throw ValidationError("hodograph_solve needs at least one node");
  if (time_steps < 1) throw ValidationError("hodograph_solve needs time_steps >= 1");
  const std::size_t mid = xs.size() / 2;
  const double x_mid = xs[mid];
  RiemannPair start{data.r0.eval(x_mid), data.k0.eval(x_mid)};
  for (int s = 1; s <= time_steps; ++s) {
    const auto sol = gensol_invert(p, t * s / time_steps, x_mid, start, opt);
    start = {sol.r, sol.k};
  }

  HodographSweep out;
  out.attempted = xs.size();
  std::vector<std::optional<RiemannPair>> found(xs.size());
  found[mid] = start;
  auto sweep = [&](std::size_t from, int dir) {
    RiemannPair guess = start;
    for (auto i = static_cast<std::ptrdiff_t>(from) + dir; i >= 0 && i < static_cast<std::ptrdiff_t>(xs.size());
         i += dir) {
      try {
        const auto sol = gensol_invert(p, t, xs[static_cast<std::size_t>(i)], guess, opt);
        guess = {sol.r, sol.k};
        found[static_cast<std::size_t>(i)] = guess;
      } catch (const Error&) {
        out.failed_x.push_back(xs[static_cast<std::size_t>(i)]);
      }
    }
  };
  sweep(mid, 1);
  sweep(mid, -1);
  std::sort(out.failed_x.begin(), out.failed_x.end());

  SolutionSnapshot& s = out.snapshot;
  s.t = t;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!found[i]) continue;
    const GasState st = law.state_from_riemann(found[i]->r, found[i]->k);
    s.x.push_back(xs[i]);
    s.r.push_back(found[i]->r);
    s.k.push_back(found[i]->k);
    s.u.push_back(st.u);
    s.rho.push_back(st.rho);
  }
  const bool uniform = std::adjacent_find(xs.begin(), xs.end(), [&](double a, double b) {
                         return std::abs((b - a) - (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1)) >
                                1e-9 * (xs.back() - xs.front());
                       }) == xs.end();
  if (const auto g = law.gamma(); g && uniform && out.failed_x.empty() && s.size() >= 2) {
    s.integrals = conserved_integrals(s, *g);
  }
  s.max_ux = max_abs_ux(s);
  return out;
}

}  // namespace charflow
