#include "charflow/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "charflow/error.hpp"
#include "charflow/io.hpp"
#include "charflow/numerics.hpp"

namespace charflow {

namespace {

constexpr int kGhost = 2;

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

void check_cfl(double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ValidationError("cfl must lie in (0, 1], got " + format_double(cfl));
}

// Rusanov flux operator, writes −∂F/∂x into (drho, dm).
class Residual {
 public:
  Residual(Eigen::Index n, double gamma, double dx) : n_(n), gamma_(gamma), dx_(dx) {
    rho_.resize(n + 2 * kGhost);
    u_.resize(n + 2 * kGhost);
    f_rho_.resize(n + 1);
    f_m_.resize(n + 1);
  }

  void operator()(const Eigen::ArrayXd& rho, const Eigen::ArrayXd& m, Eigen::ArrayXd& drho, Eigen::ArrayXd& dm,
                  int threads) {
    rho_.segment(kGhost, n_) = rho;
    u_.segment(kGhost, n_) = m / rho;
    for (int g = 0; g < kGhost; ++g) {
      rho_[g] = rho[0];
      u_[g] = u_[kGhost];
      rho_[kGhost + n_ + g] = rho[n_ - 1];
      u_[kGhost + n_ + g] = u_[kGhost + n_ - 1];
    }
    const Eigen::Index faces = n_ + 1;
    auto chunk = [&](std::size_t c) {
      const Eigen::Index per = (faces + threads - 1) / threads;
      const Eigen::Index lo = static_cast<Eigen::Index>(c) * per, hi = std::min(faces, lo + per);
      for (Eigen::Index f = lo; f < hi; ++f) flux(f);
    };
    if (threads <= 1) {
      chunk(0);
    } else {
      parallel_for(static_cast<std::size_t>(threads), threads, chunk);
    }
    drho = -(f_rho_.tail(n_) - f_rho_.head(n_)) / dx_;
    dm = -(f_m_.tail(n_) - f_m_.head(n_)) / dx_;
  }

 private:
  // Face f separates padded cells kGhost−1+f and kGhost+f.
  void flux(Eigen::Index f) {
    const Eigen::Index i = kGhost - 1 + f, j = i + 1;
    const double rl = rho_[i] + 0.5 * minmod(rho_[i] - rho_[i - 1], rho_[i + 1] - rho_[i]);
    const double ul = u_[i] + 0.5 * minmod(u_[i] - u_[i - 1], u_[i + 1] - u_[i]);
    const double rr = rho_[j] - 0.5 * minmod(rho_[j] - rho_[j - 1], rho_[j + 1] - rho_[j]);
    const double ur = u_[j] - 0.5 * minmod(u_[j] - u_[j - 1], u_[j + 1] - u_[j]);
    const double lnl = std::log(rl), lnr = std::log(rr);
    const double pl = std::exp(gamma_ * lnl) / gamma_, pr = std::exp(gamma_ * lnr) / gamma_;
    const double cl = std::exp(0.5 * (gamma_ - 1.0) * lnl), cr = std::exp(0.5 * (gamma_ - 1.0) * lnr);
    const double a = std::max(std::abs(ul) + cl, std::abs(ur) + cr);
    const double ml = rl * ul, mr = rr * ur;
    f_rho_[f] = 0.5 * (ml + mr) - 0.5 * a * (rr - rl);
    f_m_[f] = 0.5 * (ml * ul + pl + mr * ur + pr) - 0.5 * a * (mr - ml);
  }

  Eigen::Index n_;
  double gamma_, dx_;
  Eigen::ArrayXd rho_, u_, f_rho_, f_m_;
};

void check_positive(const FvState& s, const Eigen::ArrayXd& rho) {
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) {
      throw NumericalError("fv: density lost positivity at x=" + format_double(s.x[i]) + " near t=" +
                           format_double(s.t));
    }
  }
}

}  // namespace

FvState fv_initial(Window window, double dx, double gamma, const std::function<double(double)>& u0,
                   const std::function<double(double)>& rho0) {
  if (!(dx > 0.0) || !(window.hi > window.lo)) throw ValidationError("fv grid needs dx > 0 and lo < hi");
  if (gamma == 1.0) throw ValidationError("fv oracle needs gamma != 1");
  const auto n = static_cast<Eigen::Index>(std::llround((window.hi - window.lo) / dx));
  if (n < 4) throw ValidationError("fv grid needs at least four cells");
  FvState s;
  s.dx = (window.hi - window.lo) / static_cast<double>(n);
  s.gamma = gamma;
  s.x.resize(n);
  s.rho.resize(n);
  s.m.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.x[i] = window.lo + (static_cast<double>(i) + 0.5) * s.dx;
    s.rho[i] = rho0(s.x[i]);
    s.m[i] = s.rho[i] * u0(s.x[i]);
  }
  check_positive(s, s.rho);
  return s;
}

FvState fv_initial(const CauchyData& data, const Barotropy& law, double dx) {
  const auto gamma = law.gamma();
  if (!gamma) throw ValidationError("fv oracle runs polytropic laws only, got " + law.name());
  auto state = [&](double x) { return law.state_from_riemann(data.r0.eval(x), data.k0.eval(x)); };
  return fv_initial(
      data.window, dx, *gamma, [&](double x) { return state(x).u; }, [&](double x) { return state(x).rho; });
}

double fv_max_speed(const FvState& s) {
  const Eigen::ArrayXd c = s.rho.pow(0.5 * (s.gamma - 1.0));
  return ((s.m / s.rho).abs() + c).maxCoeff();
}

FvState fv_step(const FvState& s, double cfl, double dt_max, int threads) {
  check_cfl(cfl);
  const double speed = fv_max_speed(s);
  if (!std::isfinite(speed)) throw NumericalError("fv: non-finite wave speed at t=" + format_double(s.t));
  const double dt = std::min(cfl * s.dx / speed, dt_max);
  Residual L(s.size(), s.gamma, s.dx);
  Eigen::ArrayXd drho(s.size()), dm(s.size());

  L(s.rho, s.m, drho, dm, threads);
  FvState s1 = s;
  s1.rho = s.rho + dt * drho;
  s1.m = s.m + dt * dm;
  check_positive(s, s1.rho);

  L(s1.rho, s1.m, drho, dm, threads);
  FvState out = s;
  out.rho = 0.5 * (s.rho + s1.rho + dt * drho);
  out.m = 0.5 * (s.m + s1.m + dt * dm);
  check_positive(s, out.rho);
  out.t = s.t + dt;
  return out;
}

std::vector<FvState> fv_solve(const FvState& s0, const std::vector<double>& times, const FvOptions& opt) {
  check_cfl(opt.cfl);
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < s0.t)) {
    throw ValidationError("fv output times must be ascending and not before the initial time");
  }
  std::vector<FvState> out;
  out.reserve(times.size());
  FvState s = s0;
  std::size_t steps = 0;
  for (double target : times) {
    while (s.t < target) {
      if (++steps > opt.max_steps) throw NumericalError("fv: step budget exhausted at t=" + format_double(s.t));
      const double dt_cfl = opt.cfl * s.dx / fv_max_speed(s);
      const bool last = target - s.t <= dt_cfl;
      s = fv_step(s, opt.cfl, target - s.t, opt.threads);
      if (last) s.t = target;
    }
    out.push_back(s);
  }
  return out;
}

SolutionSnapshot to_snapshot(const FvState& s, const Barotropy& law) {
  SolutionSnapshot snap;
  snap.t = s.t;
  const auto n = static_cast<std::size_t>(s.size());
  snap.x.resize(n);
  snap.u.resize(n);
  snap.rho.resize(n);
  snap.r.resize(n);
  snap.k.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    snap.x[i] = s.x[e];
    snap.rho[i] = s.rho[e];
    snap.u[i] = s.m[e] / s.rho[e];
    const RiemannPair rk = law.riemann_from_state(snap.u[i], snap.rho[i]);
    snap.r[i] = rk.r;
    snap.k[i] = rk.k;
  }
  snap.integrals = conserved_integrals(snap, s.gamma);
  snap.max_ux = max_abs_ux(snap);
  return snap;
}

CompareNorms compare(const SolutionSnapshot& a, const SolutionSnapshot& b) {
  if (a.size() < 2 || b.size() < 2) throw ValidationError("compare needs at least two nodes per snapshot");
  const double lo = std::max(a.x.front(), b.x.front()), hi = std::min(a.x.back(), b.x.back());
  if (!(hi > lo)) throw ValidationError("compare: snapshot windows do not overlap");
  const MonotoneCubic brho(b.x, b.rho), bu(b.x, b.u);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.x[i] >= lo && a.x[i] <= hi) idx.push_back(i);
  }
  CompareNorms n;
  n.points = idx.size();
  if (idx.empty()) throw ValidationError("compare: no nodes of the first snapshot inside the overlap");
  double sum_rho = 0.0, sum_u = 0.0, max_rho = 0.0, max_u = 0.0;
  for (std::size_t q = 0; q < idx.size(); ++q) {
    const std::size_t i = idx[q];
    // Trapezoid weights on the selected nodes.
    const double left = q > 0 ? a.x[i] - a.x[idx[q - 1]] : 0.0;
    const double right = q + 1 < idx.size() ? a.x[idx[q + 1]] - a.x[i] : 0.0;
    const double w = idx.size() == 1 ? 1.0 : 0.5 * (left + right);
    const double dr = std::abs(brho(a.x[i]) - a.rho[i]), du = std::abs(bu(a.x[i]) - a.u[i]);
    n.l1_rho += w * dr;
    n.l1_u += w * du;
    sum_rho += w * std::abs(a.rho[i]);
    sum_u += w * std::abs(a.u[i]);
    n.linf_rho = std::max(n.linf_rho, dr);
    n.linf_u = std::max(n.linf_u, du);
    max_rho = std::max(max_rho, std::abs(a.rho[i]));
    max_u = std::max(max_u, std::abs(a.u[i]));
  }
  auto rel = [](double v, double scale) { return scale > 0.0 ? v / scale : v; };
  n.l1_rho = rel(n.l1_rho, sum_rho);
  n.l1_u = rel(n.l1_u, sum_u);
  n.linf_rho = rel(n.linf_rho, max_rho);
  n.linf_u = rel(n.linf_u, max_u);
  return n;
}

namespace {

struct Sampled {
  double u, rho;
};

// Linear interpolation on the uniform cell-center grid.
Sampled sample(const FvState& s, double x) {
  const double p = (x - s.x[0]) / s.dx;
  if (p < 0.0 || p > static_cast<double>(s.size() - 1)) {
    throw DomainError("characteristic left the fv window at x=" + format_double(x) + ", t=" + format_double(s.t));
  }
  const auto i = std::min(static_cast<Eigen::Index>(p), s.size() - 2);
  const double w = p - static_cast<double>(i);
  const double rho = (1.0 - w) * s.rho[i] + w * s.rho[i + 1];
  const double m = (1.0 - w) * s.m[i] + w * s.m[i + 1];
  return {m / rho, rho};
}

}  // namespace

double characteristic_drift(const std::vector<FvState>& run, const Barotropy& law, Side side,
                            const std::vector<double>& seeds, int substeps) {
  if (run.size() < 2) throw ValidationError("characteristic_drift needs at least two fv states");
  if (substeps < 1) throw ValidationError("characteristic_drift needs substeps >= 1");
  const double sign = side == Side::plus ? 1.0 : -1.0;
  auto at = [&](std::size_t j, double theta, double x) {
    const Sampled a = sample(run[j], x), b = sample(run[j + 1], x);
    return Sampled{(1.0 - theta) * a.u + theta * b.u, (1.0 - theta) * a.rho + theta * b.rho};
  };
  auto speed = [&](const Sampled& q) { return q.u + sign * law.sound_speed(q.rho); };
  auto invariant = [&](const Sampled& q) {
    const RiemannPair rk = law.riemann_from_state(q.u, q.rho);
    return side == Side::plus ? rk.r : rk.k;
  };
  double drift = 0.0;
  for (double x0 : seeds) {
    double x = x0;
    const double w0 = invariant(sample(run.front(), x));
    for (std::size_t j = 0; j + 1 < run.size(); ++j) {
      const double dt = (run[j + 1].t - run[j].t) / substeps;
      for (int q = 0; q < substeps; ++q) {
        const double th0 = static_cast<double>(q) / substeps, th1 = static_cast<double>(q + 1) / substeps;
        const double v0 = speed(at(j, th0, x));
        const double v1 = speed(at(j, th1, x + dt * v0));
        x += 0.5 * dt * (v0 + v1);
      }
      drift = std::max(drift, std::abs(invariant(sample(run[j + 1], x)) - w0));
    }
  }
  return drift;
}

}  // namespace charflow
