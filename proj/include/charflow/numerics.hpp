#pragma once

// Small numerical toolbox shared by the solver modules.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace charflow {

/// Fritsch–Butland monotone piecewise cubic through strictly increasing abscissae.
/// Outside [front, back] the end values are held constant.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }
  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_, y_, m_;
};

/// Root of f in [lo, hi] (f(lo), f(hi) of opposite sign) by bisection with
/// Newton steps where they stay inside the bracket.
double solve_bracketed(const std::function<double(double)>& f, const std::function<double(double)>& df, double lo,
                       double hi, double tol = 1e-14, int max_iter = 200);

/// Golden-section minimizer of a unimodal f on [a, b]; returns the argmin.
double golden_section_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// Composite Gauss–Legendre (5 nodes per panel) on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels = 8);

/// Composite Simpson on uniform samples. An even number of intervals is
/// integrated directly; an odd count closes the last interval with a cubic
/// through the last four samples.
double simpson(const std::vector<double>& y, double dx);

/// Portable RNG: mt19937_64 with an explicit 53-bit mapping, so sample streams
/// agree across standard libraries.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double a, double b) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

 private:
  std::mt19937_64 engine_;
};

/// CHARFLOW_SEED from the environment, 42 if unset or malformed.
std::uint64_t seed_from_env();

/// Runs body(i) for i in [0, n) over `threads` workers with a static
/// contiguous partition. The first exception thrown is rethrown after join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

/// Uniform grid of n points on [a, b] (n >= 2).
std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace charflow
