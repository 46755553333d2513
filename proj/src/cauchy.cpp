#include "charflow/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "charflow/io.hpp"

namespace charflow {

CauchyData CauchyData::make(const Expr& r0, const Expr& k0, Window window, std::size_t n) {
  if (!(window.hi > window.lo)) throw ValidationError("window must satisfy lo < hi");
  if (n < 2) throw ValidationError("Cauchy data needs at least two samples");
  CauchyData d;
  d.r0 = r0;
  d.k0 = k0;
  d.dr[0] = r0;
  d.dk[0] = k0;
  for (int j = 1; j < 4; ++j) {
    d.dr[j] = differentiate(d.dr[j - 1]);
    d.dk[j] = differentiate(d.dk[j - 1]);
  }
  d.window = window;
  d.n = n;
  return d;
}

CauchyData CauchyData::preset(char which, Window window, std::size_t n) {
  switch (which) {
    case 'a':
      return make(parse("x + 1/(1+x^2)"), parse("x"), window, n);
    case 'b':
      return make(parse("atan(x) + 1/(1+x^2)"), parse("atan(x)"), window, n);
    default:
      throw ValidationError(std::string("unknown preset '") + which + "'");
  }
}

std::optional<Expr> preset_h(char which, double gamma) {
  if (std::abs(gamma - 5.0 / 3.0) < 1e-12) {
    if (which == 'a') return parse("k - 1/(2*(1+k^2))", "k");
    if (which == 'b') return parse("tan(k) - 1/2", "k");
  }
  if (std::abs(gamma - 7.0 / 5.0) < 1e-12) {
    if (which == 'a') return parse("(6*k^7 + 18*k^5 - 3*k^4 + 18*k^3 - 6*k^2 + 4*k - 3)/(6*(1+k^2)^3)", "k");
    if (which == 'b') return parse("(6*tan(k)^3 - 3*tan(k)^2 + 5*tan(k) - 3)/(6*(1+tan(k)^2))", "k");
  }
  return std::nullopt;
}

JetPoint initial_jet(const CauchyData& data, const Barotropy& law, double x) {
  std::array<double, 4> rv{}, kv{};
  for (int j = 0; j < 4; ++j) {
    rv[j] = data.dr[j].eval(x);
    kv[j] = data.dk[j].eval(x);
  }
  const D3 r = TaylorJet<3>::make(rv.data());
  const D3 k = TaylorJet<3>::make(kv.data());
  const D3 u = (r + k) * 0.5;
  const D3 rho = law.phi_inverse((r - k) * 0.5);
  JetPoint p;
  p.t = 0.0;
  p.x = x;
  p.u = taylor_coefficient(u, 0);
  p.rho = taylor_coefficient(rho, 0);
  p.ux = taylor_coefficient(u, 1);
  p.rhox = taylor_coefficient(rho, 1);
  p.uxx = taylor_coefficient(u, 2);
  p.rhoxx = taylor_coefficient(rho, 2);
  p.uxxx = taylor_coefficient(u, 3);
  p.rhoxxx = taylor_coefficient(rho, 3);
  return p;
}

AdmissibilityReport check_admissible(const CauchyData& data, const Barotropy* law) {
  AdmissibilityReport rep;
  const std::vector<double> grid = linspace(data.window.lo, data.window.hi, 4 * data.n);
  auto minimize = [&](const Expr& f, double& min_value, double& x_min) {
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = f.eval(grid[i]);
      if (v < best_value) {
        best_value = v;
        best = i;
      }
    }
    const double a = grid[best == 0 ? 0 : best - 1];
    const double b = grid[std::min(best + 1, grid.size() - 1)];
    const double xr = golden_section_min([&](double x) { return f.eval(x); }, a, b);
    const double vr = f.eval(xr);
    if (vr < best_value) {
      min_value = vr;
      x_min = xr;
    } else {
      min_value = best_value;
      x_min = grid[best];
    }
  };
  minimize(data.dr[1], rep.min_dr0, rep.x_min_dr0);
  minimize(data.dk[1], rep.min_dk0, rep.x_min_dk0);
  rep.pass = rep.min_dr0 >= -1e-12 && rep.min_dk0 >= -1e-12;
  if (law) {
    if (const auto g = law->gamma()) rep.gamma_covered = *g > -1.0 && *g <= 3.0;
  }
  rep.message = rep.pass ? "admissible" : "inadmissible: ";
  if (rep.min_dr0 < -1e-12) rep.message += "r0' = " + format_double(rep.min_dr0) + " at x=" + format_double(rep.x_min_dr0) + " ";
  if (rep.min_dk0 < -1e-12) rep.message += "k0' = " + format_double(rep.min_dk0) + " at x=" + format_double(rep.x_min_dk0);
  if (!rep.gamma_covered) rep.message += " (gamma outside (-1, 3]: no smoothness guarantee)";
  return rep;
}

MonotoneInverse::MonotoneInverse(const Expr& f, Window window, std::size_t grid)
    : f_(f), df_(differentiate(f)), x_(linspace(window.lo, window.hi, grid)) {
  fy_.resize(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    fy_[i] = f_.eval(x_[i]);
    if (i > 0 && !(fy_[i] > fy_[i - 1])) {
      throw ValidationError("profile " + f.to_string() + " is not strictly increasing near x=" + format_double(x_[i]));
    }
    if (df_.eval(x_[i]) < 0.0) {
      throw ValidationError("profile " + f.to_string() + " has negative slope at x=" + format_double(x_[i]));
    }
  }
}

double MonotoneInverse::operator()(double y) const {
  if (!(y >= fy_.front() && y <= fy_.back())) {
    throw DomainError("value " + format_double(y) + " outside the range of the profile");
  }
  auto it = std::upper_bound(fy_.begin(), fy_.end(), y);
  std::size_t i = it == fy_.begin() ? 0 : static_cast<std::size_t>(it - fy_.begin()) - 1;
  i = std::min(i, x_.size() - 2);
  if (fy_[i] == y) return x_[i];
  if (fy_[i + 1] == y) return x_[i + 1];
  auto g = [&](double x) { return f_.eval(x) - y; };
  auto dg = [&](double x) { return df_.eval(x); };
  double x = solve_bracketed(g, dg, x_[i], x_[i + 1], 1e-16);
  // Newton polish; the bracket solve already lands within a few ulps.
  for (int it2 = 0; it2 < 3; ++it2) {
    const double r = g(x);
    if (std::abs(r) <= 1e-12 * (1.0 + std::abs(y))) break;
    const double d = dg(x);
    if (d == 0.0) break;
    const double next = x - r / d;
    if (next < x_[i] || next > x_[i + 1]) break;
    x = next;
  }
  return x;
}

MonotoneInverse monotone_inverse(const Expr& f, Window window) { return MonotoneInverse(f, window); }

ConstraintFn::ConstraintFn(std::vector<double> nodes, std::vector<double> values, std::function<double(double)> exact)
    : nodes_(std::move(nodes)),
      values_(std::move(values)),
      interp_(std::make_shared<MonotoneCubic>(nodes_, values_)),
      exact_(std::move(exact)),
      clamps_(std::make_shared<std::atomic<long>>(0)) {}

double ConstraintFn::table(double arg) const {
  if (arg < nodes_.front() || arg > nodes_.back()) {
    clamps_->fetch_add(1, std::memory_order_relaxed);
    arg = std::clamp(arg, nodes_.front(), nodes_.back());
  }
  return (*interp_)(arg);
}

double ConstraintFn::operator()(double arg) const {
  if (uses_closed_form()) return closed_->eval(arg);
  return table(arg);
}

void ConstraintFn::set_closed_form(const Expr& e, bool prefer) {
  closed_ = e;
  prefer_closed_ = prefer;
}

void ConstraintFn::write_csv(const std::string& path, const std::string& arg_name, const std::string& value_name) const {
  CsvWriter w(path, {arg_name, value_name});
  for (std::size_t i = 0; i < nodes_.size(); ++i) w.row({nodes_[i], values_[i]});
}

namespace {

ConstraintFn determine(const CauchyData& data, const Barotropy& law, const InvariantSpec& spec, bool minus) {
  const Expr& carrier = minus ? data.k0 : data.r0;
  const Expr& carrier_d = minus ? data.dk[1] : data.dr[1];
  const char* carrier_name = minus ? "k0" : "r0";
  const std::vector<double> xs = linspace(data.window.lo, data.window.hi, data.n);
  std::vector<double> args(xs.size()), values(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    args[i] = carrier.eval(x);
    if (carrier_d.eval(x) <= 0.0 && data.r0.eval(x) != data.k0.eval(x)) {
      throw ValidationError(std::string(carrier_name) + "' vanishes at x=" + format_double(x) +
                            " where r0 != k0: no constraint function exists");
    }
    if (i > 0 && !(args[i] > args[i - 1])) {
      throw ValidationError(std::string(carrier_name) + " is not strictly increasing near x=" + format_double(x));
    }
    const JetPoint p = initial_jet(data, law, x);
    if (!(spec.guard(p) > 0.0)) {
      throw NumericalError(spec.label() + " is undefined on the initial curve at x=" + format_double(x));
    }
    values[i] = spec.f(p);
    if (!std::isfinite(values[i])) {
      throw NumericalError(spec.label() + " is not finite on the initial curve at x=" + format_double(x));
    }
  }
  auto inverse = std::make_shared<MonotoneInverse>(carrier, data.window);
  auto exact = [inverse, data, law, f = spec.f](double arg) { return f(initial_jet(data, law, (*inverse)(arg))); };
  return ConstraintFn(std::move(args), std::move(values), exact);
}

}  // namespace

ConstraintFn determine_h(const CauchyData& data, const Barotropy& law, const InvariantSpec& i_minus) {
  if (i_minus.side != Side::minus) throw ValidationError("determine_h needs a minus-side invariant");
  return determine(data, law, i_minus, true);
}

ConstraintFn determine_g(const CauchyData& data, const Barotropy& law, const InvariantSpec& i_plus) {
  if (i_plus.side != Side::plus) throw ValidationError("determine_g needs a plus-side invariant");
  return determine(data, law, i_plus, false);
}

Conserved conserved_integrals(const SolutionSnapshot& snap, double gamma) {
  if (gamma == 1.0) throw ValidationError("energy integral is undefined for gamma = 1");
  Conserved c;
  const std::size_t n = snap.size();
  if (n < 2) return c;
  const double dx = (snap.x.back() - snap.x.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(snap.x[i] - snap.x[i - 1] - dx) > 1e-8 * std::max(1.0, std::abs(dx))) {
      throw ValidationError("conserved integrals need a uniform grid");
    }
  }
  std::vector<double> m(n), p(n), e(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = snap.rho[i], u = snap.u[i];
    m[i] = rho;
    p[i] = u * rho;
    e[i] = 0.5 * u * u * rho + std::pow(rho, gamma) / (gamma * (gamma - 1.0));
  }
  c.M = simpson(m, dx);
  c.P = simpson(p, dx);
  c.E = simpson(e, dx);
  return c;
}

}  // namespace charflow
