#include <doctest.h>

#include <cmath>
#include <numbers>

#include "charflow/cauchy.hpp"
#include "charflow/error.hpp"
#include "charflow/flow.hpp"
#include "charflow/numerics.hpp"

using namespace charflow;

TEST_CASE("admissibility of the two problems") {
  const auto a = check_admissible(CauchyData::preset('a'));
  CHECK(a.pass);
  // r0' = 1 - 2x/(1+x^2)^2 has its minimum at x = 1/sqrt(3).
  const double x_star = 1.0 / std::sqrt(3.0);
  const double oracle = golden_section_min([](double x) { return 1.0 - 2.0 * x / std::pow(1 + x * x, 2); }, 0.0, 2.0);
  CHECK(oracle == doctest::Approx(x_star).epsilon(1e-6));
  CHECK(a.min_dr0 == doctest::Approx(1.0 - 9.0 / (8.0 * std::sqrt(3.0))).epsilon(1e-10));
  CHECK(a.x_min_dr0 == doctest::Approx(x_star).epsilon(1e-5));
  CHECK(a.min_dk0 == doctest::Approx(1.0));

  CHECK(check_admissible(CauchyData::preset('b')).pass);

  const auto bad = CauchyData::make(parse("x"), parse("-x"), {-5, 5}, 101);
  const auto rep = check_admissible(bad);
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_dk0 == doctest::Approx(-1.0));
  CHECK_FALSE(rep.message.empty());

  const auto g = Barotropy::polytropic(5.0);
  CHECK_FALSE(check_admissible(CauchyData::preset('a'), &g).gamma_covered);
}

TEST_CASE("initial jet") {
  const auto law = Barotropy::polytropic(5.0 / 3.0);
  const JetPoint p = initial_jet(CauchyData::preset('a'), law, 0.0);
  CHECK(p.t == 0.0);
  CHECK(p.u == doctest::Approx(0.5));
  CHECK(p.rho == doctest::Approx(1.0 / 216.0).epsilon(1e-14));
  CHECK(p.ux == doctest::Approx(1.0));   // (r0' + k0')/2 at 0
  CHECK(std::abs(p.rhox) < 1e-15);      // ρ is even
}

TEST_CASE("monotone inverse") {
  const auto at = monotone_inverse(parse("atan(x)"), {-10, 10});
  CHECK(at(std::numbers::pi / 4) == doctest::Approx(1.0).epsilon(1e-13));
  const auto id = monotone_inverse(parse("x"), {-3, 3});
  for (double y : {-2.5, 0.0, 1.7}) CHECK(id(y) == doctest::Approx(y).epsilon(1e-14));
  const Expr r0 = CauchyData::preset('a').r0;
  const auto inv = monotone_inverse(r0, {-60, 60});
  CHECK(std::abs(inv(r0.eval(2.0)) - 2.0) < 1e-12);
  CHECK_THROWS((void)inv(1e3));
  CHECK_THROWS_AS((void)monotone_inverse(parse("1"), {-1, 1}), ValidationError);
  CHECK_THROWS_AS((void)monotone_inverse(parse("x^2"), {-1, 1}), ValidationError);
}

TEST_CASE("determine_h reproduces the closed forms") {
  struct Case {
    char preset;
    double gamma;
    const char* inv;
  };
  for (const Case c : {Case{'a', 5.0 / 3.0, "G53.I"}, Case{'b', 5.0 / 3.0, "G53.I"}, Case{'a', 1.4, "G75.I"},
                       Case{'b', 1.4, "G75.I"}}) {
    const auto law = Barotropy::polytropic(c.gamma);
    const auto data = CauchyData::preset(c.preset, {-60, 60}, 4001);
    const auto h = determine_h(data, law, find_invariant(catalog(law), c.inv, Side::minus));
    const Expr closed = *preset_h(c.preset, c.gamma);
    INFO(c.preset, " gamma=", c.gamma);
    for (std::size_t i = 0; i < h.nodes().size(); i += 40) {
      const double k = h.nodes()[i];
      CHECK(std::abs(h.values()[i] - closed.eval(k)) <= 1e-10 * (1.0 + std::abs(closed.eval(k))));
      CHECK(std::abs(h.exact(k) - closed.eval(k)) <= 1e-10 * (1.0 + std::abs(closed.eval(k))));
    }
  }
  const auto law = Barotropy::polytropic(5.0 / 3.0);
  const auto h = determine_h(CauchyData::preset('a'), law, find_invariant(catalog(law), "G53.I", Side::minus));
  CHECK(h(0.0) == doctest::Approx(-0.5).epsilon(1e-12));
  const auto l75 = Barotropy::polytropic(1.4);
  const auto h75 = determine_h(CauchyData::preset('a'), l75, find_invariant(catalog(l75), "G75.I", Side::minus));
  CHECK(h75.exact(0.0) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("constraint tables clamp and honour closed forms") {
  const auto law = Barotropy::polytropic(5.0 / 3.0);
  auto h = determine_h(CauchyData::preset('a', {-5, 5}, 401), law,
                       find_invariant(catalog(law), "G53.I", Side::minus));
  CHECK_FALSE(h.uses_closed_form());
  CHECK(h.clamp_count() == 0);
  (void)h(100.0);
  CHECK(h.clamp_count() == 1);
  h.set_closed_form(*preset_h('a', 5.0 / 3.0));
  CHECK(h.uses_closed_form());
  CHECK(h(100.0) == doctest::Approx(100.0 - 0.5 / (1 + 1e4)));
  h.set_closed_form(*preset_h('a', 5.0 / 3.0), false);
  CHECK_FALSE(h.uses_closed_form());
  // Table interpolation error between nodes stays small.
  CHECK(std::abs(h.table(0.0123) - (0.0123 - 0.5 / (1 + 0.0123 * 0.0123))) < 1e-6);
}

TEST_CASE("determine_g inverts r0 for the Hopf invariant") {
  const auto g3 = Barotropy::polytropic(3.0);
  const auto data = CauchyData::preset('a', {-20, 20}, 2001);
  const auto g = determine_g(data, g3, find_invariant(catalog(g3), "Case1.I1", Side::plus));
  const auto inv = monotone_inverse(data.r0, data.window);
  for (double r : {-10.0, -1.0, 0.3, 1.0, 4.2}) CHECK(g.exact(r) == doctest::Approx(inv(r)).epsilon(1e-12));
  const auto flat = CauchyData::make(parse("1"), parse("x"), {-1, 1}, 11);
  CHECK_THROWS_AS((void)determine_g(flat, g3, find_invariant(catalog(g3), "Case1.I1", Side::plus)), ValidationError);
}

namespace {

SolutionSnapshot initial_snapshot(char which, double gamma) {
  const auto law = Barotropy::polytropic(gamma);
  const auto data = CauchyData::preset(which, {-60, 60}, 4001);
  const auto x = linspace(-60, 60, 4001);
  std::vector<double> r, k;
  for (double v : x) {
    r.push_back(data.r0.eval(v));
    k.push_back(data.k0.eval(v));
  }
  return assemble_snapshot(0.0, x, r, k, x, law);
}

}  // namespace

TEST_CASE("conserved integrals at t = 0") {
  const auto s53 = initial_snapshot('a', 5.0 / 3.0);
  // ∫ dx/(1+x²)³ = 3π/8 and ρ = 1/(216 (1+x²)³); the window tail is below 1e-10.
  CHECK(conserved_integrals(s53, 5.0 / 3.0).M == doctest::Approx(std::numbers::pi / 576.0).epsilon(1e-6));
  const auto s75 = initial_snapshot('a', 1.4);
  CHECK(conserved_integrals(s75, 1.4).M == doctest::Approx(1e-5 * 35.0 * std::numbers::pi / 128.0).epsilon(1e-6));

  SolutionSnapshot zero;
  zero.x = linspace(0, 1, 11);
  zero.u.assign(11, 0.0);
  zero.rho.assign(11, 0.0);
  const auto c = conserved_integrals(zero, 5.0 / 3.0);
  CHECK(c.M == 0.0);
  CHECK(c.P == 0.0);
  CHECK(c.E == 0.0);
}
