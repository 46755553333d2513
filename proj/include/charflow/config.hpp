#pragma once

// Run configuration: one JSON document per run. See docs/config.md.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "charflow/barotropy.hpp"
#include "charflow/cauchy.hpp"
#include "charflow/expr.hpp"
#include "charflow/flow.hpp"

namespace charflow {

struct LawConfig {
  std::string law = "polytropic";  // polytropic | case2 | case3 | case4 | case5
  double gamma = 5.0 / 3.0;
  double C = 0.0, C1 = 1.0, C2 = 1.0;
  double branch_ref_rho = 1.0;
  std::optional<std::pair<double, double>> phi_bracket;
  double rho_min = 0.0;

  Barotropy build() const;
};

struct RunConfig {
  LawConfig barotropy;
  std::optional<FlowCase> flow_case;

  std::optional<char> preset;  // 'a' or 'b'
  std::string r0, k0;          // used when no preset
  std::optional<std::string> h, g;  // closed forms, in k and r
  bool use_closed_forms = true;

  Window window;
  std::size_t samples = 4001;  // nodes of the determined constraint tables
  std::size_t fan_size = 4001;
  std::size_t grid_n = 4001;
  std::vector<double> times{0.0};

  double ode_rtol = 1e-10, ode_atol = 1e-12;
  double delta_sing = 1e-8, kx_max = 1e8;
  double verify_tol = 1e-9;
  std::size_t verify_samples = 1000;

  double fv_dx = 0.015, fv_cfl = 0.5;

  Window hodograph_window{-4.0, 4.0};
  std::size_t hodograph_n = 321;
  int hodograph_time_steps = 40;
  bool hodograph_compare = true;

  std::string output_dir = "out";
  int threads = 1;

  CauchyData data() const;
  FlowOptions flow_options() const;
};

/// Parses and validates a JSON document. Throws ValidationError with the
/// offending key in the message.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// "5/3" or "1.4" as a number.
double parse_number_text(const std::string& s);

}  // namespace charflow
