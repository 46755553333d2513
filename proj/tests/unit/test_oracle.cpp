#include <doctest.h>

#include <cmath>

#include "charflow/cauchy.hpp"
#include "charflow/error.hpp"
#include "charflow/numerics.hpp"
#include "charflow/oracle.hpp"

using namespace charflow;

TEST_CASE("constant states are preserved") {
  const auto s0 = fv_initial({-1, 1}, 0.05, 5.0 / 3.0, [](double) { return 0.3; }, [](double) { return 1.7; });
  FvState s = s0;
  for (int i = 0; i < 50; ++i) s = fv_step(s, 0.5);
  CHECK((s.rho - 1.7).abs().maxCoeff() < 1e-14);
  CHECK((s.m - 0.51).abs().maxCoeff() < 1e-14);
  CHECK(s.t > 0.0);
}

TEST_CASE("mass is conserved for compactly supported disturbances") {
  const auto s0 = fv_initial({-5, 5}, 0.02, 1.4, [](double) { return 0.0; },
                             [](double x) { return 1.0 + 0.2 * std::exp(-4 * x * x); });
  const auto run = fv_solve(s0, {0.5, 1.0});
  CHECK(run.back().t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(run.back().rho.sum() - s0.rho.sum()) * s0.dx < 1e-12);
}

TEST_CASE("invalid input is rejected") {
  CHECK_THROWS_AS((void)fv_initial({-1, 1}, 0.1, 5.0 / 3.0, [](double) { return 0.0; }, [](double) { return -1.0; }),
                  Error);
  const auto s0 = fv_initial({-1, 1}, 0.1, 5.0 / 3.0, [](double) { return 0.0; }, [](double) { return 1.0; });
  CHECK_THROWS_AS((void)fv_step(s0, 1.5), ValidationError);
  CHECK_THROWS_AS((void)fv_solve(s0, {-1.0}), ValidationError);
}

namespace {

// Problem (a) for γ = 3, where φ = ρ and r, k are transported exactly.
double hopf_error(double dx, double t) {
  const auto data = CauchyData::preset('a', {-10, 10}, 401);
  const auto law = Barotropy::polytropic(3.0);
  const auto run = fv_solve(fv_initial(data, law, dx), {t});
  const auto& s = run.back();
  double err = 0.0, mass = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double x = s.x[i];
    if (std::abs(x) > 8.0) continue;
    const double k = x / (1.0 + t);
    const double x0 = solve_bracketed([&](double y) { return y + data.r0.eval(y) * t - x; },
                                      [&](double y) { return 1.0 + data.dr[1].eval(y) * t; }, x - 20, x + 20);
    const double rho = 0.5 * (data.r0.eval(x0) - k);
    err += std::abs(s.rho[i] - rho);
    mass += rho;
  }
  return err / mass;
}

}  // namespace

TEST_CASE("second-order convergence against exact transport") {
  const double coarse = hopf_error(0.04, 0.5), fine = hopf_error(0.02, 0.5);
  INFO("coarse=", coarse, " fine=", fine);
  CHECK(std::log2(coarse / fine) >= 1.8);
}

TEST_CASE("compare norms") {
  SolutionSnapshot a;
  a.x = linspace(-1, 1, 41);
  for (double x : a.x) {
    a.rho.push_back(2.0 + x);
    a.u.push_back(x * x);
  }
  const auto same = compare(a, a);
  CHECK(same.l1_rho == 0.0);
  CHECK(same.linf_rho == 0.0);
  CHECK(same.l1_u == 0.0);
  CHECK(same.linf_u == 0.0);
  CHECK(same.points == 41);

  SolutionSnapshot b = a;
  for (double& r : b.rho) r += 0.01;
  CHECK(compare(a, b).linf_rho == doctest::Approx(0.01 / 3.0).epsilon(1e-12));

  SolutionSnapshot far = a;
  for (double& x : far.x) x += 10.0;
  CHECK_THROWS_AS((void)compare(a, far), ValidationError);
}

TEST_CASE("characteristic drift") {
  const auto law = Barotropy::polytropic(5.0 / 3.0);
  const auto s0 = fv_initial({-2, 2}, 0.05, 5.0 / 3.0, [](double) { return 0.2; }, [](double) { return 1.0; });
  const auto run = fv_solve(s0, {0.0, 0.1, 0.2, 0.3});
  CHECK(characteristic_drift(run, law, Side::plus, {-1.0, 0.0, 0.5}) < 1e-13);
  CHECK(characteristic_drift(run, law, Side::minus, {-1.0, 0.0, 0.5}) < 1e-13);
  CHECK_THROWS_AS((void)characteristic_drift(run, law, Side::plus, {1.9}), DomainError);
}

TEST_CASE("characteristic drift converges under refinement") {
  const auto law = Barotropy::polytropic(5.0 / 3.0);
  const auto data = CauchyData::preset('a', {-12, 12}, 401);
  const auto seeds = linspace(-2, 2, 20);
  auto drift = [&](double dx) {
    std::vector<double> times;
    for (int i = 0; i <= 200; ++i) times.push_back(i * 0.01);
    const auto run = fv_solve(fv_initial(data, law, dx), times);
    return std::max(characteristic_drift(run, law, Side::plus, seeds),
                    characteristic_drift(run, law, Side::minus, seeds));
  };
  const double coarse = drift(0.04), fine = drift(0.02);
  INFO("coarse=", coarse, " fine=", fine);
  CHECK(fine < coarse / 2.5);
}
