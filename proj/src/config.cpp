#include "charflow/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "charflow/error.hpp"

namespace charflow {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_number_text(j.get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(key + ": " + e.what());
    }
  }
  throw ValidationError(key + " must be a number");
}

double positive(const json& j, const std::string& key) {
  const double v = number(j, key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(key + " must be positive");
  return v;
}

std::size_t count(const json& j, const std::string& key, std::size_t min) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min)) {
    throw ValidationError(key + " must be an integer >= " + std::to_string(min));
  }
  return j.get<std::size_t>();
}

Window window(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(key + " must be [lo, hi]");
  Window w{number(j[0], key), number(j[1], key)};
  if (!(w.hi > w.lo)) throw ValidationError(key + " must satisfy lo < hi");
  return w;
}

std::string text(const json& j, const std::string& key) {
  if (!j.is_string()) throw ValidationError(key + " must be a string");
  return j.get<std::string>();
}

// Parses now so that config errors surface before any run starts.
void check_expr(const std::string& src, const std::string& var, const std::string& key) {
  try {
    (void)parse(src, var);
  } catch (const ParseError& e) {
    throw ValidationError(key + ": " + e.what());
  }
}

LawConfig parse_law(const json& j) {
  LawConfig c;
  if (j.is_string()) {
    c.gamma = parse_number_text(j.get<std::string>());
    return c;
  }
  if (j.is_number()) {
    c.gamma = j.get<double>();
    return c;
  }
  only_keys(j, "barotropy", {"law", "gamma", "C", "C1", "C2", "branch_ref_rho", "phi_bracket", "rho_min"});
  if (j.contains("law")) c.law = text(j["law"], "barotropy.law");
  static const std::set<std::string> laws{"polytropic", "case2", "case3", "case4", "case5"};
  if (!laws.count(c.law)) throw ValidationError("barotropy.law must be one of polytropic, case2..case5");
  if (j.contains("gamma")) c.gamma = number(j["gamma"], "barotropy.gamma");
  if (j.contains("C")) c.C = number(j["C"], "barotropy.C");
  if (j.contains("C1")) c.C1 = number(j["C1"], "barotropy.C1");
  if (j.contains("C2")) c.C2 = number(j["C2"], "barotropy.C2");
  if (j.contains("branch_ref_rho")) c.branch_ref_rho = positive(j["branch_ref_rho"], "barotropy.branch_ref_rho");
  if (j.contains("phi_bracket")) {
    const Window w = window(j["phi_bracket"], "barotropy.phi_bracket");
    c.phi_bracket = std::pair{w.lo, w.hi};
  }
  if (j.contains("rho_min")) {
    c.rho_min = number(j["rho_min"], "barotropy.rho_min");
    if (c.rho_min < 0.0) throw ValidationError("barotropy.rho_min must be non-negative");
  }
  return c;
}

}  // namespace

double parse_number_text(const std::string& s) {
  const auto slash = s.find('/');
  auto one = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || !std::isfinite(v)) throw ValidationError("'" + s + "' is not a number");
    return v;
  };
  if (slash == std::string::npos) return one(s);
  const double den = one(s.substr(slash + 1));
  if (den == 0.0) throw ValidationError("'" + s + "' divides by zero");
  return one(s.substr(0, slash)) / den;
}

Barotropy LawConfig::build() const {
  Barotropy b = [&] {
    if (law == "polytropic") return Barotropy::polytropic(gamma);
    if (law == "case2") return Barotropy::case2(C);
    if (law == "case3") return Barotropy::case3(C);
    if (law == "case4") return Barotropy::case4(C1, C2, branch_ref_rho, phi_bracket);
    return Barotropy::case5(C1, C2, branch_ref_rho, phi_bracket);
  }();
  b.set_rho_min(rho_min);
  return b;
}

CauchyData RunConfig::data() const {
  if (preset) return CauchyData::preset(*preset, window, samples);
  return CauchyData::make(parse(r0), parse(k0), window, samples);
}

FlowOptions RunConfig::flow_options() const {
  FlowOptions o;
  o.rtol = ode_rtol;
  o.atol = ode_atol;
  o.delta_sing = delta_sing;
  o.kx_max = kx_max;
  o.fan_size = fan_size;
  o.grid_n = grid_n;
  o.threads = threads;
  return o;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, "config",
            {"barotropy", "case", "initial", "constraints", "window", "samples", "fan_size", "grid_n", "times",
             "tolerances", "verify", "fv", "hodograph", "output_dir", "threads"});
  RunConfig c;
  if (j.contains("barotropy")) c.barotropy = parse_law(j["barotropy"]);
  if (j.contains("case")) {
    const std::string s = text(j["case"], "case");
    if (s != "fv" && s != "verify" && s != "hodograph") c.flow_case = parse_flow_case(s);
    if (s == "hodograph") c.flow_case = FlowCase::g53;
  }

  if (j.contains("initial")) {
    const json& ini = j["initial"];
    only_keys(ini, "initial", {"preset", "r0", "k0"});
    if (ini.contains("preset")) {
      std::string p = text(ini["preset"], "initial.preset");
      p.erase(std::remove_if(p.begin(), p.end(), [](char ch) { return ch == '(' || ch == ')'; }), p.end());
      if (p != "a" && p != "b") throw ValidationError("initial.preset must be \"a\" or \"b\"");
      if (ini.contains("r0") || ini.contains("k0")) throw ValidationError("initial: give either preset or r0/k0");
      c.preset = p[0];
    } else {
      if (!ini.contains("r0") || !ini.contains("k0")) throw ValidationError("initial needs preset or both r0 and k0");
      c.r0 = text(ini["r0"], "initial.r0");
      c.k0 = text(ini["k0"], "initial.k0");
      check_expr(c.r0, "x", "initial.r0");
      check_expr(c.k0, "x", "initial.k0");
    }
  } else {
    c.preset = 'a';
  }

  if (j.contains("constraints")) {
    const json& cs = j["constraints"];
    only_keys(cs, "constraints", {"h", "g", "use_closed_forms"});
    if (cs.contains("h")) {
      c.h = text(cs["h"], "constraints.h");
      check_expr(*c.h, "k", "constraints.h");
    }
    if (cs.contains("g")) {
      c.g = text(cs["g"], "constraints.g");
      check_expr(*c.g, "r", "constraints.g");
    }
    if (cs.contains("use_closed_forms")) {
      if (!cs["use_closed_forms"].is_boolean()) throw ValidationError("constraints.use_closed_forms must be boolean");
      c.use_closed_forms = cs["use_closed_forms"].get<bool>();
    }
  }

  if (j.contains("window")) c.window = window(j["window"], "window");
  if (j.contains("samples")) c.samples = count(j["samples"], "samples", 2);
  if (j.contains("fan_size")) c.fan_size = count(j["fan_size"], "fan_size", 16);
  if (j.contains("grid_n")) c.grid_n = count(j["grid_n"], "grid_n", 2);
  if (j.contains("times")) {
    const json& t = j["times"];
    if (!t.is_array() || t.empty()) throw ValidationError("times must be a non-empty array");
    c.times.clear();
    for (const auto& v : t) c.times.push_back(number(v, "times"));
  }
  if (c.times.front() != 0.0) throw ValidationError("times must start at 0");
  for (std::size_t i = 1; i < c.times.size(); ++i) {
    if (!(c.times[i] > c.times[i - 1])) throw ValidationError("times must be strictly ascending");
  }

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    only_keys(t, "tolerances", {"ode_rtol", "ode_atol", "delta_sing", "kx_max", "verify"});
    if (t.contains("ode_rtol")) c.ode_rtol = positive(t["ode_rtol"], "tolerances.ode_rtol");
    if (t.contains("ode_atol")) c.ode_atol = positive(t["ode_atol"], "tolerances.ode_atol");
    if (t.contains("delta_sing")) c.delta_sing = positive(t["delta_sing"], "tolerances.delta_sing");
    if (t.contains("kx_max")) c.kx_max = positive(t["kx_max"], "tolerances.kx_max");
    if (t.contains("verify")) c.verify_tol = positive(t["verify"], "tolerances.verify");
  }
  if (j.contains("verify")) {
    only_keys(j["verify"], "verify", {"samples"});
    if (j["verify"].contains("samples")) c.verify_samples = count(j["verify"]["samples"], "verify.samples", 1);
  }
  if (j.contains("fv")) {
    const json& f = j["fv"];
    only_keys(f, "fv", {"dx", "cfl"});
    if (f.contains("dx")) c.fv_dx = positive(f["dx"], "fv.dx");
    if (f.contains("cfl")) {
      c.fv_cfl = positive(f["cfl"], "fv.cfl");
      if (c.fv_cfl > 1.0) throw ValidationError("fv.cfl must lie in (0, 1]");
    }
  }
  if (j.contains("hodograph")) {
    const json& h = j["hodograph"];
    only_keys(h, "hodograph", {"window", "n", "time_steps", "compare"});
    if (h.contains("window")) c.hodograph_window = window(h["window"], "hodograph.window");
    if (h.contains("n")) c.hodograph_n = count(h["n"], "hodograph.n", 1);
    if (h.contains("time_steps")) c.hodograph_time_steps = static_cast<int>(count(h["time_steps"], "hodograph.time_steps", 1));
    if (h.contains("compare")) {
      if (!h["compare"].is_boolean()) throw ValidationError("hodograph.compare must be boolean");
      c.hodograph_compare = h["compare"].get<bool>();
    }
  }
  if (j.contains("output_dir")) c.output_dir = text(j["output_dir"], "output_dir");
  if (j.contains("threads")) c.threads = static_cast<int>(count(j["threads"], "threads", 1));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace charflow
