#pragma once

#include <string>
#include <vector>

namespace charflow {

struct Conserved {
  double M = 0.0;  // ∫ ρ
  double P = 0.0;  // ∫ u ρ
  double E = 0.0;  // ∫ u²ρ/2 + ρ^γ/(γ(γ−1))
};

/// Fields at one time on strictly increasing nodes x.
struct SolutionSnapshot {
  double t = 0.0;
  std::vector<double> x, u, rho, r, k;
  Conserved integrals;
  double max_ux = 0.0;

  std::size_t size() const { return x.size(); }
};

/// max |u_x| by central differences (one-sided at the ends).
double max_abs_ux(const SolutionSnapshot& s);

/// Writes `t,x,u,rho,r,k` with full round-trip precision.
void write_snapshot_csv(const SolutionSnapshot& s, const std::string& path);

}  // namespace charflow
