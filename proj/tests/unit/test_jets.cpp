#include <doctest.h>

#include <cmath>

#include "charflow/catalog.hpp"
#include "charflow/error.hpp"
#include "charflow/jets.hpp"
#include "charflow/numerics.hpp"

using namespace charflow;

namespace {

JetPoint point(double t, double x, double u, double rho, double ux, double rhox) {
  JetPoint p;
  p.t = t;
  p.x = x;
  p.u = u;
  p.rho = rho;
  p.ux = ux;
  p.rhox = rhox;
  return p;
}

const JetFunction jf_x(0, [](const auto& j) { return j.x; });
const JetFunction jf_u(0, [](const auto& j) { return j.u; });
const JetFunction jf_rho(0, [](const auto& j) { return j.rho; });

}  // namespace

TEST_CASE("total x-derivative") {
  const JetPoint p = point(2.0, 0.3, 1.0, 2.0, 0.1, 0.2);
  CHECK(total_dx(jf_x, p) == 1.0);
  CHECK(total_dx(jf_u, p) == 0.1);
  const JetFunction hopf(0, [](const auto& j) { return j.x - (j.u + j.rho) * j.t; });
  CHECK(total_dx(hopf, p) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("total t-derivative follows the gas equations") {
  const auto g53 = Barotropy::polytropic(5.0 / 3.0);
  CHECK(total_dt(jf_u, point(0, 0, 1.0, 1.0, 0, 0), g53) == 0.0);
  CHECK(total_dt(jf_rho, point(0, 0, 0.0, 1.0, 2.0, 0.0), g53) == doctest::Approx(-2.0));
  CHECK(total_dt(jf_u, point(0, 0, 0.0, 1.0, 0.0, 3.0), g53) == doctest::Approx(-3.0));
}

TEST_CASE("characteristic fields") {
  const auto g53 = Barotropy::polytropic(5.0 / 3.0);
  CHECK(characteristic_apply(Side::plus, jf_u, point(0, 0, 0.0, 1.0, 0.0, 3.0), g53) == doctest::Approx(-3.0));

  SampleRng rng(seed_from_env());
  const auto g3 = Barotropy::polytropic(3.0);
  const JetFunction i2(1, [](const auto& j) { return 1.0 / (j.ux + j.rhox) - j.t; });
  for (const auto& law : {g53, g3, Barotropy::case2(0.5)}) {
    const auto r = riemann_r(law), k = riemann_k(law);
    for (int i = 0; i < 200; ++i) {
      const JetPoint p = point(rng.uniform(-2, 2), rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.2, 5),
                               rng.uniform(-2, 2), rng.uniform(-2, 2));
      CHECK(std::abs(characteristic_apply(Side::plus, r.f, p, law)) < 1e-12);
      CHECK(std::abs(characteristic_apply(Side::minus, k.f, p, law)) < 1e-12);
      if (&law == &g3 || law.name() == g3.name()) {
        if (std::abs(p.ux + p.rhox) > 0.1) CHECK(std::abs(characteristic_apply(Side::plus, i2, p, g3)) < 1e-9);
      }
    }
  }
}

TEST_CASE("catalog contents") {
  auto names = [](const Barotropy& law) {
    std::vector<std::string> out;
    for (const auto& s : catalog(law)) out.push_back(s.label());
    return out;
  };
  const auto g3 = names(Barotropy::polytropic(3.0));
  CHECK(g3.size() == 6);
  const auto g12 = names(Barotropy::polytropic(1.2));
  CHECK(g12 == std::vector<std::string>{"Riemann.r+", "Riemann.k-"});
  const auto cat53 = catalog(Barotropy::polytropic(5.0 / 3.0));
  CHECK_NOTHROW((void)find_invariant(cat53, "G53.I", Side::plus));
  CHECK_NOTHROW((void)find_invariant(cat53, "G53.I", Side::minus));
  CHECK_THROWS_AS((void)find_invariant(cat53, "Case1.I1", Side::plus), ValidationError);
}

TEST_CASE("G53 invariant has the stated closed form and agrees with Case3 at C = 0") {
  const auto g53 = Barotropy::polytropic(5.0 / 3.0);
  const auto ip = find_invariant(catalog(g53), "G53.I", Side::plus);
  const auto c3 = Barotropy::case3(0.0);
  const auto i3 = find_invariant(catalog(c3), "Case3.I", Side::plus);
  const auto samples = sample_jet_points(ip, g53, 500, seed_from_env());
  for (const auto& p : samples.points) {
    const auto rj = riemann_jet(g53, p);
    const double expect = p.x - rj.r * p.t + (rj.r - rj.k) / (2.0 * rj.rx);
    CHECK(ip.f(p) == doctest::Approx(expect).epsilon(1e-12));
    if (std::abs(i3.guard(p)) >= kDenominatorGuard) {
      CHECK(std::abs(i3.f(p) - ip.f(p)) <= 1e-12 * (1.0 + std::abs(ip.f(p))));
    }
  }
}

TEST_CASE("invariance residuals") {
  const auto g75 = Barotropy::polytropic(7.0 / 5.0);
  const auto r = riemann_r(g75);
  const auto rs = sample_jet_points(r, g75, 1000, seed_from_env());
  CHECK(invariance_residual(r, g75, rs.points) <= 1e-12);
  for (const auto& spec : catalog(g75)) {
    const auto s = sample_jet_points(spec, g75, 1000, seed_from_env());
    INFO(spec.label());
    CHECK(invariance_residual(spec, g75, s.points) <= 1e-9);
  }
  const auto bad = corrupted_riemann(g75);
  CHECK(invariance_residual(bad, g75, sample_jet_points(bad, g75, 1000, 1).points) > 1e-3);
  const auto pert = perturb_invariant(r);
  CHECK(invariance_residual(pert, g75, sample_jet_points(pert, g75, 1000, 1).points) > 1e-3);
}

TEST_CASE("property: every catalogued invariant is annihilated") {
  for (const auto& law : {Barotropy::polytropic(3.0), Barotropy::polytropic(5.0 / 3.0), Barotropy::polytropic(1.4),
                          Barotropy::polytropic(1.0 / 3.0), Barotropy::case2(1.0), Barotropy::case3(0.5),
                          Barotropy::case4(1.0, 1.0), Barotropy::case5(1.0, 0.5)}) {
    for (const auto& spec : catalog(law)) {
      const auto s = sample_jet_points(spec, law, 300, seed_from_env());
      INFO(law.name(), " ", spec.label());
      CHECK_FALSE(s.high_rejection);
      CHECK(invariance_residual(spec, law, s.points) <= 1e-9);
    }
  }
}

TEST_CASE("shift operator") {
  const auto g3 = Barotropy::polytropic(3.0);
  const auto cat = catalog(g3);
  const auto i1 = find_invariant(cat, "Case1.I1", Side::plus);
  const auto i2 = find_invariant(cat, "Case1.I2", Side::plus);
  const auto shifted = shift_invariant(i1, g3);
  CHECK(shifted.name == "shift(Case1.I1)");
  const auto s = sample_jet_points(i2, g3, 300, seed_from_env());
  for (const auto& p : s.points) CHECK(shifted.f(p) == doctest::Approx(i2.f(p)).epsilon(1e-12));
  const auto one = shift_invariant(riemann_r(g3), g3);
  for (const auto& p : s.points) CHECK(one.f(p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(invariance_residual(shifted, g3, s.points) <= 1e-9);
  // The minus-side I2 is the mirror image of the plus one, which flips its sign relative to the shift.
  const auto m1 = shift_invariant(find_invariant(cat, "Case1.I1", Side::minus), g3);
  const auto m2 = find_invariant(cat, "Case1.I2", Side::minus);
  for (const auto& p : sample_jet_points(m2, g3, 300, seed_from_env()).points) {
    CHECK(m1.f(p) == doctest::Approx(-m2.f(p)).epsilon(1e-12));
  }
}

TEST_CASE("property: shift commutes with the characteristic field") {
  const auto law = Barotropy::polytropic(5.0 / 3.0);
  const auto r = riemann_r(law);
  const JetFunction psi(1, [](const auto& j) { return j.x * j.u + j.rho * j.ux - j.t * j.rhox; });
  const auto s = sample_jet_points(r, law, 300, seed_from_env());
  CHECK(commutator_residual(Side::plus, psi, law, s.points) <= 1e-9);
  CHECK(commutator_residual(Side::minus, psi, law, s.points) <= 1e-9);
}

TEST_CASE("property: jet operators are linear") {
  const auto law = Barotropy::polytropic(1.4);
  const JetFunction f(1, [](const auto& j) { return sin(j.x) * j.ux + j.rho * j.rho; });
  const JetFunction g(1, [](const auto& j) { return j.u * j.rhox - exp(j.t); });
  const JetFunction comb(1, [&](const auto& j) { return 2.5 * f(j) - 0.75 * g(j); });
  SampleRng rng(seed_from_env());
  for (int i = 0; i < 100; ++i) {
    JetPoint p = point(rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.3, 3),
                       rng.uniform(-1, 1), rng.uniform(-1, 1));
    p.uxx = rng.uniform(-1, 1);
    p.rhoxx = rng.uniform(-1, 1);
    for (Side side : {Side::plus, Side::minus}) {
      const double lhs = characteristic_apply(side, comb, p, law);
      const double rhs = 2.5 * characteristic_apply(side, f, p, law) - 0.75 * characteristic_apply(side, g, p, law);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    CHECK(total_dx(comb, p) == doctest::Approx(2.5 * total_dx(f, p) - 0.75 * total_dx(g, p)).epsilon(1e-12));
  }
}

TEST_CASE("property: exact partials agree with finite differences") {
  const JetFunction f(2, [](const auto& j) { return j.x * j.uxx + sin(j.rho) * j.rhox - j.t * j.u * j.rhoxx; });
  SampleRng rng(seed_from_env());
  for (int n = 0; n < 50; ++n) {
    JetPoint p;
    for (int i = 0; i < JetPoint::size; ++i) p[i] = rng.uniform(-1, 1);
    const auto d = partials(f, p);
    for (int i = 0; i < JetPoint::size; ++i) {
      JetPoint a = p, b = p;
      a[i] += 1e-6;
      b[i] -= 1e-6;
      CHECK(std::abs(d[i] - (f(a) - f(b)) / 2e-6) < 1e-8);
    }
  }
}

TEST_CASE("samplers respect the guards") {
  const auto law = Barotropy::polytropic(5.0 / 3.0);
  const auto ip = find_invariant(catalog(law), "G53.I", Side::plus);
  const auto s = sample_jet_points(ip, law, 200, 42);
  CHECK(s.points.size() == 200);
  for (const auto& p : s.points) CHECK(ip.guard(p) >= kDenominatorGuard);
  const auto again = sample_jet_points(ip, law, 200, 42);
  CHECK(again.points[17].rhox == s.points[17].rhox);
}
