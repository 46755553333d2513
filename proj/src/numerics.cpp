#include "charflow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "charflow/error.hpp"

namespace charflow {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw ValidationError("monotone cubic needs at least two matching samples");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw ValidationError("monotone cubic abscissae must be strictly increasing");
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  m_.assign(n, 0.0);
  m_[0] = delta[0];
  m_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d0 = delta[i - 1], d1 = delta[i];
    if (d0 * d1 <= 0.0) {
      m_[i] = 0.0;
      continue;
    }
    // Brodlie weighting of the harmonic mean.
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    m_[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
  }
}

std::size_t MonotoneCubic::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * m_[i] + (-2 * s3 + 3 * s2) * y_[i + 1] +
         (s3 - s2) * h * m_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * y_[i] + (-6 * s2 + 6 * s) * y_[i + 1]) / h + (3 * s2 - 4 * s + 1) * m_[i] +
         (3 * s2 - 2 * s) * m_[i + 1];
}

double solve_bracketed(const std::function<double(double)>& f, const std::function<double(double)>& df, double lo,
                       double hi, double tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw NumericalError("root not bracketed");
  if (flo > 0) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  // Invariant: f(lo) < 0 < f(hi).
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0) lo = x;
    else hi = x;
    double next = 0.5 * (lo + hi);
    if (df) {
      const double d = df(x);
      if (d != 0.0 && std::isfinite(d)) {
        const double newton = x - fx / d;
        if ((newton - lo) * (newton - hi) < 0.0) next = newton;
      }
    }
    if (std::abs(next - x) <= tol * (1.0 + std::abs(x)) || std::abs(hi - lo) <= tol * (1.0 + std::abs(x))) {
      return next;
    }
    x = next;
  }
  throw NumericalError("bracketed root solve did not converge");
}

double golden_section_min(const std::function<double(double)>& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
  static constexpr double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                      0.9061798459386640};
  static constexpr double weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                        0.4786286704993665, 0.2369268850561891};
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) sum += weights[i] * f(mid + 0.5 * h * nodes[i]);
  }
  return 0.5 * h * sum;
}

double simpson(const std::vector<double>& y, double dx) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * dx * (y[0] + y[1]);
  if (n == 3) return dx / 3.0 * (y[0] + 4 * y[1] + y[2]);
  const std::size_t intervals = n - 1;
  const std::size_t even = intervals % 2 == 0 ? intervals : intervals - 1;
  double s = y[0] + y[even];
  for (std::size_t i = 1; i < even; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
  s *= dx / 3.0;
  if (even != intervals) {
    // Last interval from the cubic through the final four samples.
    const double y0 = y[n - 4], y1 = y[n - 3], y2 = y[n - 2], y3 = y[n - 1];
    s += dx / 24.0 * (y0 - 5 * y1 + 19 * y2 + 9 * y3);
  }
  return s;
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("CHARFLOW_SEED");
  if (!s || !*s) return 42;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0') return 42;
  return v;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads > 0 ? threads : 1, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw ValidationError("linspace needs at least two points");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = b;
  return v;
}

}  // namespace charflow
