#include "charflow/catalog.hpp"

#include <cmath>
#include <limits>

namespace charflow {

namespace {

constexpr double kNoDenominator = std::numeric_limits<double>::infinity();

// (t, u) -> (-t, -u) maps the system to itself and X+ to -X-, so it turns an
// X+-invariant into an X--invariant.
template <typename S>
Jet<S> mirror(const Jet<S>& j) {
  Jet<S> m = j;
  m.t = -j.t;
  m.u = -j.u;
  m.ux = -j.ux;
  m.uxx = -j.uxx;
  m.uxxx = -j.uxxx;
  return m;
}

using Guard = std::function<double(const JetPoint&)>;

InvariantSpec make_spec(std::string name, Side side, int order, JetFunction f, Guard guard) {
  InvariantSpec s;
  s.name = std::move(name);
  s.side = side;
  s.order = order;
  s.required_jet_order = order + 1;
  s.f = std::move(f);
  s.guard = guard ? std::move(guard) : Guard([](const JetPoint&) { return kNoDenominator; });
  return s;
}

// Adds a plus-side invariant and its mirrored minus-side counterpart.
template <typename F>
void add_mirrored(std::vector<InvariantSpec>& out, const std::string& name, int order, F f, Guard guard) {
  out.push_back(make_spec(name, Side::plus, order, JetFunction(order, f), guard));
  auto fm = [f](const auto& j) { return f(mirror(j)); };
  Guard gm;
  if (guard) gm = [guard](const JetPoint& j) { return guard(mirror(j)); };
  out.push_back(make_spec(name, Side::minus, order, JetFunction(order, fm), gm));
}

template <typename FP, typename FM>
void add_pair(std::vector<InvariantSpec>& out, const std::string& name, int order, FP fp, FM fm, Guard gp,
              Guard gm) {
  out.push_back(make_spec(name, Side::plus, order, JetFunction(order, fp), gp));
  out.push_back(make_spec(name, Side::minus, order, JetFunction(order, fm), gm));
}

// Auxiliaries a, b of the second-order polytropic invariants.
template <typename S>
std::pair<S, S> aux_ab(double gamma, const Jet<S>& j) {
  const double al = (gamma - 3.0) / 4.0;
  const S p1 = pow(j.rho, al), p2 = pow(j.rho, 2 * al), p3 = pow(j.rho, 3 * al);
  const S a = p1 * j.ux + p3 * j.rhox;
  const S ax = al * p1 / j.rho * j.rhox * j.ux + p1 * j.uxx + 3 * al * p3 / j.rho * j.rhox * j.rhox + p3 * j.rhoxx;
  const S w = j.ux + p2 * j.rhox;
  const S b = p1 * ax + (gamma * gamma - 2 * gamma - 3) / (16 * (gamma - 1)) / j.rho * w * w;
  return {a, b};
}

double aux_a(double gamma, const JetPoint& j) { return std::abs(aux_ab(gamma, j).first); }

void add_case1(std::vector<InvariantSpec>& out) {
  add_mirrored(
      out, "Case1.I1", 0, [](const auto& j) { return j.x - (j.u + j.rho) * j.t; }, nullptr);
  add_mirrored(
      out, "Case1.I2", 1, [](const auto& j) { return 1.0 / (j.ux + j.rhox) - j.t; },
      [](const JetPoint& j) { return std::abs(j.ux + j.rhox); });
}

void add_case2(std::vector<InvariantSpec>& out, double C) {
  add_mirrored(
      out, "Case2.I", 1,
      [C](const auto& j) {
        const auto s = j.rho + C;
        return C * j.t - s * s * s / (j.rhox + s * s * j.ux);
      },
      [C](const JetPoint& j) {
        const double s = j.rho + C;
        return std::abs(j.rhox + s * s * j.ux);
      });
}

void add_case3(std::vector<InvariantSpec>& out, double C) {
  add_mirrored(
      out, "Case3.I", 1,
      [C](const auto& j) {
        const auto q = cbrt(j.rho + C);
        return j.x - (j.u + 3.0 * q) * j.t + 3.0 * (j.rho + C) / (j.rhox + q * q * j.ux);
      },
      [C](const JetPoint& j) {
        const double q = std::cbrt(j.rho + C);
        return std::min(std::abs(j.rhox + q * q * j.ux), std::abs(j.rho + C));
      });
}

// Cases 4 and 5 share one shape with w = φ − C1ρ (Case4) or φ + C1ρ (Case5).
void add_case45(std::vector<InvariantSpec>& out, const Barotropy& law, const std::string& name, double C1,
                double sign) {
  add_mirrored(
      out, name, 1,
      [law, C1, sign](const auto& j) {
        const auto f = law.phi(j.rho);
        const auto w = f + sign * C1 * j.rho;
        return j.x - (j.u + f) * j.t + w * w * w / (C1 * j.rhox + w * w * j.ux);
      },
      [law, C1, sign](const JetPoint& j) {
        const double w = law.phi(j.rho) + sign * C1 * j.rho;
        return std::abs(C1 * j.rhox + w * w * j.ux);
      });
}

void add_case6(std::vector<InvariantSpec>& out) {
  const double g = 1.0 / 3.0;
  add_mirrored(
      out, "Case6.I", 2,
      [g](const auto& j) {
        const auto [a, b] = aux_ab(g, j);
        return b / (a * a * a);
      },
      [g](const JetPoint& j) { return aux_a(g, j); });
}

void add_case7(std::vector<InvariantSpec>& out) {
  const double g = 7.0 / 5.0;
  add_mirrored(
      out, "Case7.I", 2,
      [g](const auto& j) {
        const auto [a, b] = aux_ab(g, j);
        return j.x - (j.u + 5.0 * pow(j.rho, 0.2)) * j.t - 25.0 * b / (3.0 * (a * a * a));
      },
      [g](const JetPoint& j) { return aux_a(g, j); });
}

void add_g53(std::vector<InvariantSpec>& out, const Barotropy& law) {
  add_pair(
      out, "G53.I", 1,
      [law](const auto& j) {
        const auto q = riemann_jet(law, j);
        return j.x - q.r * j.t + (q.r - q.k) / (2.0 * q.rx);
      },
      [law](const auto& j) {
        const auto q = riemann_jet(law, j);
        return j.x - q.k * j.t + (q.k - q.r) / (2.0 * q.kx);
      },
      [law](const JetPoint& j) { return std::abs(riemann_jet(law, j).rx); },
      [law](const JetPoint& j) { return std::abs(riemann_jet(law, j).kx); });
}

void add_g75(std::vector<InvariantSpec>& out, const Barotropy& law) {
  add_pair(
      out, "G75.I", 2,
      [law](const auto& j) {
        const auto q = riemann_jet(law, j);
        const auto d = q.r - q.k;
        return j.x - q.r * j.t + d * (2.0 * q.rx * (4.0 * q.rx - q.kx) - d * q.rxx) / (12.0 * q.rx * q.rx * q.rx);
      },
      [law](const auto& j) {
        const auto q = riemann_jet(law, j);
        const auto d = q.k - q.r;
        return j.x - q.k * j.t + d * (2.0 * q.kx * (4.0 * q.kx - q.rx) - d * q.kxx) / (12.0 * q.kx * q.kx * q.kx);
      },
      [law](const JetPoint& j) { return std::abs(riemann_jet(law, j).rx); },
      [law](const JetPoint& j) { return std::abs(riemann_jet(law, j).kx); });
}

void add_g13(std::vector<InvariantSpec>& out, const Barotropy& law) {
  add_pair(
      out, "G13.I", 2,
      [law](const auto& j) {
        const auto q = riemann_jet(law, j);
        const auto d = q.k - q.r;
        return (q.rxx * d + 2.0 * q.rx * q.kx) / (d * d * d * q.rx * q.rx * q.rx);
      },
      [law](const auto& j) {
        const auto q = riemann_jet(law, j);
        const auto d = q.r - q.k;
        return (q.kxx * d + 2.0 * q.kx * q.rx) / (d * d * d * q.kx * q.kx * q.kx);
      },
      [law](const JetPoint& j) { return std::abs(riemann_jet(law, j).rx); },
      [law](const JetPoint& j) { return std::abs(riemann_jet(law, j).kx); });
}

}  // namespace

const char* side_name(Side s) { return s == Side::plus ? "+" : "-"; }

InvariantSpec riemann_r(const Barotropy& law) {
  return make_spec("Riemann.r", Side::plus, 0, JetFunction(0, [law](const auto& j) { return j.u + law.phi(j.rho); }),
                   nullptr);
}

InvariantSpec riemann_k(const Barotropy& law) {
  return make_spec("Riemann.k", Side::minus, 0,
                   JetFunction(0, [law](const auto& j) { return j.u - law.phi(j.rho); }), nullptr);
}

std::vector<InvariantSpec> catalog(const Barotropy& law) {
  std::vector<InvariantSpec> out{riemann_r(law), riemann_k(law)};
  std::visit(
      [&](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Polytropic>) {
          const auto g = law.classified_gamma();
          if (!g) return;
          if (*g == 3.0) {
            add_case1(out);
          } else if (*g == 5.0 / 3.0) {
            add_case3(out, 0.0);
            add_g53(out, law);
          } else if (*g == 7.0 / 5.0) {
            add_case7(out);
            add_g75(out, law);
          } else {
            add_case6(out);
            add_g13(out, law);
          }
        } else if constexpr (std::is_same_v<L, Case2>) {
          add_case2(out, l.C);
        } else if constexpr (std::is_same_v<L, Case3>) {
          add_case3(out, l.C);
        } else if constexpr (std::is_same_v<L, Case4>) {
          add_case45(out, law, "Case4.I", l.C1, -1.0);
        } else {
          add_case45(out, law, "Case5.I", l.C1, +1.0);
        }
      },
      law.law());
  return out;
}

const InvariantSpec& find_invariant(const std::vector<InvariantSpec>& cat, std::string_view name, Side side) {
  for (const auto& s : cat) {
    if (s.name == name && s.side == side) return s;
  }
  throw ValidationError("no invariant " + std::string(name) + side_name(side) + " in the catalog");
}

}  // namespace charflow
