#include <doctest.h>

#include <cmath>

#include "charflow/cauchy.hpp"
#include "charflow/error.hpp"
#include "charflow/flow.hpp"

using namespace charflow;

namespace {

double h_a(double k) { return k - 0.5 / (1.0 + k * k); }
double zero(double) { return 0.0; }

}  // namespace

TEST_CASE("rhs of the G53 flow") {
  const auto d = rhs_g53({0.0, 1.0, 0.0}, 0.0, h_a);
  CHECK(d[0] == doctest::Approx(2.0 / 3.0));
  CHECK(d[1] == 0.0);
  CHECK(d[2] == doctest::Approx(1.0 / 3.0));
  CHECK(rhs_g53({5.0, 2.0, 2.0}, 0.0, h_a)[2] == 0.0);
  // At t = 0 the denominator equals (r0 − k0)/(2 k0′); at x = 0 for (a) that is 1/2.
  CHECK(0.0 - 0.0 * 0.0 - h_a(0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS((void)rhs_g53({-0.5, 1.0, 0.0}, 0.0, h_a), NumericalError);
}

TEST_CASE("rhs of the G75 flow") {
  const auto d = rhs_g75({0.0, 1.0, 0.0, 1.0}, 0.0, h_a);
  CHECK(d[0] == doctest::Approx(0.6));
  CHECK(d[1] == 0.0);
  CHECK(d[2] == doctest::Approx(0.2));
  CHECK(d[3] == doctest::Approx(-1.0));
  CHECK_THROWS_AS((void)rhs_g75({0.0, 1.0, 1.0, 1.0}, 0.0, h_a), NumericalError);
  const auto rest = rhs_g75({0.3, 1.0, 0.0, 0.0}, 0.0, h_a);
  CHECK(rest[2] == 0.0);
  CHECK(rest[3] == 0.0);
  CHECK_THROWS_AS((void)rhs_g75({0.0, 1.0, 0.0, 2e8}, 0.0, h_a), NumericalError);
}

TEST_CASE("rhs of the G13 flow") {
  const auto c = rhs_g13({0.0, 1.0, 0.0, 0.0, 0.0}, 0.0, zero, zero);
  for (double v : c) CHECK(v == 0.0);
  const auto d = rhs_g13({0.0, 1.0, 0.0, 1.0, 1.0}, 0.0, zero, zero);
  CHECK(d[0] == doctest::Approx(-1.0 / 3.0));
  CHECK(d[1] == doctest::Approx(-2.0 / 3.0));
  // −((r_x+2k_x)/3)r_x − ((r+2k)/3)(0 − 2r_xk_x/(k−r)) = −1 − (1/3)(2) = −5/3.
  CHECK(d[2] == doctest::Approx(-5.0 / 3.0));
  CHECK(d[3] == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS((void)rhs_g13({0.0, 1.0, 1.0, 1.0, 1.0}, 0.0, zero, zero), NumericalError);
}

TEST_CASE("characteristics of simple states") {
  const auto hopf = integrate_trajectory(HopfState{1.0, 1.0}, {0.0, 2.0});
  REQUIRE(hopf.complete);
  CHECK(hopf.states.back().x == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(hopf.states.back().k == 1.0);

  const Constraint far = [](double) { return -1e3; };
  const auto flat = integrate_trajectory(G53State{0.5, 0.7, 0.7}, {0.0, 1.0, 4.0}, far);
  REQUIRE(flat.complete);
  CHECK(flat.states[2].x == doctest::Approx(0.5 + 0.7 * 4.0).epsilon(1e-12));
  CHECK(flat.states[2].k == 0.7);

  const auto a = integrate_trajectory(G53State{0.0, 1.0, 0.0}, {0.0, 2.0, 6.0}, h_a);
  REQUIRE(a.complete);
  for (const auto& s : a.states) {
    CHECK(std::isfinite(s.x));
    CHECK(std::isfinite(s.k));
    CHECK(std::abs(s.r - 1.0) <= 1e-10);
  }
}

TEST_CASE("G53 trajectories keep the constraint") {
  // Along a characteristic, x − kt − h(k) stays equal to (r−k)/(2k_x); k_x is measured from neighbours.
  const auto data = CauchyData::preset('a', {-60, 60}, 4001);
  const double eps = 1e-5, t = 2.0;
  auto run = [&](double x0) {
    return integrate_trajectory(G53State{x0, data.r0.eval(x0), data.k0.eval(x0)}, {0.0, t}, h_a).states.back();
  };
  for (double x0 : {-1.0, 0.0, 0.7}) {
    const auto m = run(x0), lo = run(x0 - eps), hi = run(x0 + eps);
    const double kx = (hi.k - lo.k) / (hi.x - lo.x);
    CHECK(std::abs(m.x - m.k * t - h_a(m.k) - (m.r - m.k) / (2.0 * kx)) < 1e-6);
  }
}

TEST_CASE("solve_cauchy for the Hopf flow is the exact transport") {
  const auto data = CauchyData::make(parse("x + 2"), parse("x"), {-10, 10}, 201);
  FlowOptions opt;
  opt.fan_size = 201;
  opt.grid_n = 201;
  const auto law = Barotropy::polytropic(3.0);
  const auto res = solve_cauchy(FlowCase::hopf, data, law, nullptr, nullptr, {0.0, 1.0}, opt);
  const auto& s = res.snapshots[1];
  REQUIRE(s.size() > 100);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.k[i] == doctest::Approx(s.x[i] / 2.0).epsilon(1e-9));
    CHECK(s.r[i] == doctest::Approx((s.x[i] + 2.0) / 2.0).epsilon(1e-9));
  }
}

TEST_CASE("solve_cauchy detects crossing characteristics") {
  const auto data = CauchyData::make(parse("2 - x"), parse("-x"), {-1, 1}, 41);
  FlowOptions opt;
  opt.fan_size = 41;
  opt.grid_n = 41;
  try {
    (void)solve_cauchy(FlowCase::hopf, data, Barotropy::polytropic(3.0), nullptr, nullptr, {0.0, 2.0}, opt);
    FAIL("expected a crossing");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("cross") != std::string::npos);
  }
}

TEST_CASE("solve_cauchy validates its inputs") {
  const auto data = CauchyData::preset('a', {-5, 5}, 101);
  FlowOptions opt;
  opt.fan_size = 64;
  opt.grid_n = 64;
  const auto g53 = Barotropy::polytropic(5.0 / 3.0);
  CHECK_THROWS_AS((void)solve_cauchy(FlowCase::g53, data, Barotropy::polytropic(1.4), h_a, nullptr, {0.0}, opt),
                  ValidationError);
  CHECK_THROWS_AS((void)solve_cauchy(FlowCase::g53, data, g53, nullptr, nullptr, {0.0}, opt), ValidationError);
  CHECK_THROWS_AS((void)solve_cauchy(FlowCase::g53, data, g53, h_a, nullptr, {1.0, 2.0}, opt), ValidationError);
  CHECK_THROWS_AS((void)solve_cauchy(FlowCase::g53, data, g53, h_a, nullptr, {0.0, 2.0, 1.0}, opt), ValidationError);
  CHECK(parse_flow_case("g75") == FlowCase::g75);
  CHECK_THROWS_AS((void)parse_flow_case("g99"), ValidationError);
}

TEST_CASE("G53 problem (a): the density leans right, spreads and decays") {
  const auto data = CauchyData::preset('a');
  FlowOptions opt;
  opt.fan_size = 1001;
  opt.grid_n = 2001;
  const auto res = solve_cauchy(FlowCase::g53, data, Barotropy::polytropic(5.0 / 3.0), h_a, nullptr, {0.0, 2.0, 6.0}, opt);
  auto argmax = [](const SolutionSnapshot& s) {
    return static_cast<std::size_t>(std::max_element(s.rho.begin(), s.rho.end()) - s.rho.begin());
  };
  double prev_max = 1e300, prev_width = 0.0;
  for (const auto& s : res.snapshots) {
    const std::size_t m = argmax(s);
    CHECK(s.rho[m] < prev_max);
    prev_max = s.rho[m];
    // Half-maximum points: for t > 0 the maximum leans right, so the right flank is the steeper one.
    std::size_t lo = m, hi = m;
    while (lo > 0 && s.rho[lo] > s.rho[m] / 2) --lo;
    while (hi + 1 < s.size() && s.rho[hi] > s.rho[m] / 2) ++hi;
    const double left = s.x[m] - s.x[lo], right = s.x[hi] - s.x[m];
    if (s.t == 0.0) CHECK(std::abs(right - left) < 0.1);
    else CHECK(right < 0.8 * left);
    CHECK(left + right > prev_width);
    prev_width = left + right;
  }
}

TEST_CASE("fan seeds") {
  const auto data = CauchyData::preset('a', {-60, 60}, 4001);
  const auto plain = fan_seeds(data, 101, false);
  CHECK(plain.size() == 101);
  CHECK(plain.front() == -60.0);
  CHECK(plain.back() == 60.0);
  const auto dense = fan_seeds(data, 101, true);
  CHECK(std::is_sorted(dense.begin(), dense.end()));
  // Seeds cluster where the profile bends.
  const auto near = std::count_if(dense.begin(), dense.end(), [](double x) { return std::abs(x) < 2.0; });
  CHECK(near > 5);
}

TEST_CASE("threads do not change the result") {
  const auto data = CauchyData::preset('b', {-20, 20}, 401);
  const Constraint h = [](double k) { return std::tan(k) - 0.5; };
  FlowOptions opt;
  opt.fan_size = 200;
  opt.grid_n = 300;
  const auto law = Barotropy::polytropic(5.0 / 3.0);
  const auto one = solve_cauchy(FlowCase::g53, data, law, h, nullptr, {0.0, 1.0}, opt);
  opt.threads = 4;
  const auto four = solve_cauchy(FlowCase::g53, data, law, h, nullptr, {0.0, 1.0}, opt);
  CHECK(one.snapshots[1].rho == four.snapshots[1].rho);
}
