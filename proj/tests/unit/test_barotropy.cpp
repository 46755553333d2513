#include <doctest.h>

#include <cmath>
#include <vector>

#include "charflow/barotropy.hpp"
#include "charflow/error.hpp"

using namespace charflow;

TEST_CASE("phi of the polytropic laws") {
  CHECK(Barotropy::polytropic(3.0).phi(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(Barotropy::polytropic(5.0 / 3.0).phi(1.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(Barotropy::polytropic(7.0 / 5.0).phi(1.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(Barotropy::polytropic(5.0 / 3.0).phi(8.0) == doctest::Approx(6.0).epsilon(1e-15));
  // γ < 1 gives a negative, increasing φ.
  const auto third = Barotropy::polytropic(1.0 / 3.0);
  CHECK(third.phi(1.0) == doctest::Approx(-3.0));
  CHECK(third.dphi(1.0) > 0.0);
  CHECK_THROWS_AS((void)third.phi(-1.0), DomainError);
}

TEST_CASE("sound speed and pressure") {
  const auto g3 = Barotropy::polytropic(3.0);
  CHECK(g3.sound_speed(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g3.pressure(2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  const auto g53 = Barotropy::polytropic(5.0 / 3.0);
  CHECK(g53.sound_speed(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g53.pressure(1.0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(Barotropy::case2(1.0).pressure(1.0) == doctest::Approx(-7.0 / 24.0).epsilon(1e-15));
}

TEST_CASE("Case3 with C = 0 is the γ = 5/3 polytrope") {
  const auto c3 = Barotropy::case3(0.0);
  const auto g53 = Barotropy::polytropic(5.0 / 3.0);
  for (double rho : {0.01, 0.3, 1.0, 7.5}) {
    CHECK(c3.phi(rho) == doctest::Approx(g53.phi(rho)).epsilon(1e-14));
    CHECK(c3.pressure(rho) == doctest::Approx(g53.pressure(rho)).epsilon(1e-14));
  }
}

namespace {

std::vector<Barotropy> all_laws() {
  return {Barotropy::polytropic(3.0),      Barotropy::polytropic(5.0 / 3.0), Barotropy::polytropic(7.0 / 5.0),
          Barotropy::polytropic(1.0 / 3.0), Barotropy::polytropic(1.2),      Barotropy::case2(1.0),
          Barotropy::case3(0.5),           Barotropy::case4(1.0, 1.0),       Barotropy::case5(1.0, 0.5)};
}

std::vector<double> densities(const Barotropy& law) {
  const auto [lo, hi] = law.rho_range();
  std::vector<double> out;
  const double a = std::max(lo, 0.05), b = std::min(hi, 5.0);
  for (int i = 1; i < 10; ++i) out.push_back(a + (b - a) * i / 10.0);
  return out;
}

}  // namespace

TEST_CASE("property: c^2 equals dp/drho") {
  for (const auto& law : all_laws()) {
    for (double rho : densities(law)) {
      const double h = 1e-5 * rho;
      const double dp = (law.pressure(rho + h) - law.pressure(rho - h)) / (2.0 * h);
      const double c = law.sound_speed(rho);
      INFO(law.name(), " rho=", rho);
      CHECK(std::abs(c * c - dp) <= 1e-6 * (1.0 + std::abs(dp)));
    }
  }
}

TEST_CASE("property: phi is increasing and phi_inverse inverts it") {
  for (const auto& law : all_laws()) {
    for (double rho : densities(law)) {
      INFO(law.name(), " rho=", rho);
      CHECK(law.dphi(rho) > 0.0);
      CHECK(law.phi_inverse(law.phi(rho)) == doctest::Approx(rho).epsilon(1e-11));
      const double h = 1e-5 * rho;
      CHECK(law.d2phi(rho) == doctest::Approx((law.dphi(rho + h) - law.dphi(rho - h)) / (2 * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("riemann_from_state and state_from_riemann") {
  const auto g53 = Barotropy::polytropic(5.0 / 3.0);
  auto rk = g53.riemann_from_state(0.0, 1.0);
  CHECK(rk.r == doctest::Approx(3.0));
  CHECK(rk.k == doctest::Approx(-3.0));
  rk = Barotropy::polytropic(3.0).riemann_from_state(1.0, 2.0);
  CHECK(rk.r == doctest::Approx(3.0));
  CHECK(rk.k == doctest::Approx(-1.0));

  CHECK(g53.state_from_riemann(1.0, 0.0).rho == doctest::Approx(1.0 / 216.0).epsilon(1e-14));
  CHECK(g53.state_from_riemann(1.0, 0.0).u == 0.5);
  CHECK(Barotropy::polytropic(1.4).state_from_riemann(1.0, 0.0).rho == doctest::Approx(1e-5).epsilon(1e-13));
  CHECK_THROWS_AS((void)g53.state_from_riemann(1.0, 1.0), DomainError);
  // φ < 0 for γ < 1, so admissible states have r < k.
  const auto third = Barotropy::polytropic(1.0 / 3.0);
  const auto s = third.riemann_from_state(0.2, 0.5);
  CHECK(s.r < s.k);
  CHECK(third.state_from_riemann(s.r, s.k).rho == doctest::Approx(0.5).epsilon(1e-13));
  CHECK_THROWS_AS((void)third.state_from_riemann(1.0, 0.0), DomainError);
}

TEST_CASE("vacuum threshold") {
  auto law = Barotropy::polytropic(5.0 / 3.0);
  law.set_rho_min(1e-2);  // ρ = 1/216 at r = 1, k = 0
  CHECK_THROWS_AS((void)law.state_from_riemann(1.0, 0.0), DomainError);
  CHECK_NOTHROW((void)law.state_from_riemann(6.0, 0.0));
}

TEST_CASE("classified exponents") {
  CHECK(Barotropy::polytropic(5.0 / 3.0).classified_gamma().value() == doctest::Approx(5.0 / 3.0));
  CHECK(Barotropy::polytropic(1.0 / 3.0).classified_gamma().has_value());
  CHECK_FALSE(Barotropy::polytropic(1.2).classified_gamma().has_value());
  CHECK_FALSE(Barotropy::case2(1.0).gamma().has_value());
}

TEST_CASE("implicit laws keep to their branch") {
  const auto c4 = Barotropy::case4(1.0, 1.0);
  REQUIRE(c4.branch() != nullptr);
  const auto [lo, hi] = c4.rho_range();
  CHECK(lo < 1.0);
  CHECK(hi > 1.0);
  if (std::isfinite(hi)) CHECK_THROWS_AS((void)c4.phi(hi + 1.0), DomainError);
}
