#include "charflow/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "charflow/catalog.hpp"
#include "charflow/error.hpp"
#include "charflow/hodograph.hpp"
#include "charflow/io.hpp"
#include "charflow/jets.hpp"
#include "charflow/numerics.hpp"
#include "charflow/oracle.hpp"

namespace charflow {

namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  return (fs::path(cfg.output_dir) / name).string();
}

std::string time_tag(double t) { return "t" + format_double(t); }

FlowCase require_case(const RunConfig& cfg, const Barotropy& law) {
  if (!cfg.flow_case) throw ValidationError("config needs a case (hopf, g53, g75 or g13)");
  const FlowCase fc = *cfg.flow_case;
  const auto gamma = law.gamma();
  if (!gamma || std::abs(*gamma - flow_case_gamma(fc)) > 1e-12) {
    throw ValidationError(std::string("no invariant catalog for case ") + flow_case_name(fc) + " with " + law.name() +
                          " (the case needs gamma=" + format_double(flow_case_gamma(fc)) + ")");
  }
  return fc;
}

void check_data(const CauchyData& data, const Barotropy& law, std::ostream& log) {
  const AdmissibilityReport rep = check_admissible(data, &law);
  if (!rep.pass) throw ValidationError(rep.message);
  if (!rep.gamma_covered) log << "warning: " << rep.message << '\n';
}

struct Constraints {
  std::optional<ConstraintFn> h, g;
};

Constraints determine_constraints(const RunConfig& cfg, FlowCase fc, const CauchyData& data, const Barotropy& law) {
  Constraints out;
  if (fc == FlowCase::hopf) return out;
  const char* name = fc == FlowCase::g53 ? "G53.I" : fc == FlowCase::g75 ? "G75.I" : "G13.I";
  const auto cat = catalog(law);
  out.h = determine_h(data, law, find_invariant(cat, name, Side::minus));
  if (cfg.h) {
    out.h->set_closed_form(parse(*cfg.h, "k"), cfg.use_closed_forms);
  } else if (cfg.preset) {
    if (auto e = preset_h(*cfg.preset, *law.gamma())) out.h->set_closed_form(*e, cfg.use_closed_forms);
  }
  if (fc == FlowCase::g13) {
    out.g = determine_g(data, law, find_invariant(cat, name, Side::plus));
    if (cfg.g) out.g->set_closed_form(parse(*cfg.g, "r"), cfg.use_closed_forms);
  }
  return out;
}

Constraint as_function(const std::optional<ConstraintFn>& c) {
  if (!c) return {};
  return [fn = *c](double v) { return fn(v); };
}

void report_clamps(const Constraints& cs, std::ostream& log) {
  if (cs.h && cs.h->clamp_count() > 0) {
    log << "warning: h evaluated outside its table " << cs.h->clamp_count() << " times (clamped)\n";
  }
  if (cs.g && cs.g->clamp_count() > 0) {
    log << "warning: g evaluated outside its table " << cs.g->clamp_count() << " times (clamped)\n";
  }
}

void write_plot_data(const RunConfig& cfg, const SolutionSnapshot& s, const std::string& prefix) {
  std::ofstream rho(out_path(cfg, prefix + "rho_" + time_tag(s.t) + ".dat"));
  std::ofstream u(out_path(cfg, prefix + "u_" + time_tag(s.t) + ".dat"));
  rho << "# x rho\n";
  u << "# x u\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    rho << format_double(s.x[i]) << ' ' << format_double(s.rho[i]) << '\n';
    u << format_double(s.x[i]) << ' ' << format_double(s.u[i]) << '\n';
  }
  if (!rho || !u) throw Error("cannot write plot data in " + cfg.output_dir);
}

void write_gnuplot(const RunConfig& cfg, const std::vector<double>& times, const std::string& prefix) {
  std::ofstream gp(out_path(cfg, prefix + "plot.gp"));
  gp << "set terminal pngcairo size 900,600\n"
     << "set output '" << prefix << "rho.png'\n"
     << "set xlabel 'x'\nset ylabel 'rho'\n"
     << "plot ";
  for (std::size_t i = 0; i < times.size(); ++i) {
    gp << (i ? ", " : "") << "'" << prefix << "rho_" << time_tag(times[i]) << ".dat' with lines title 't = "
       << format_double(times[i]) << "'";
  }
  gp << "\nset output '" << prefix << "u.png'\nset ylabel 'u'\nplot ";
  for (std::size_t i = 0; i < times.size(); ++i) {
    gp << (i ? ", " : "") << "'" << prefix << "u_" << time_tag(times[i]) << ".dat' with lines title 't = "
       << format_double(times[i]) << "'";
  }
  gp << '\n';
}

void write_summary(const std::string& path, const std::vector<SolutionSnapshot>& snaps) {
  CsvWriter w(path, {"t", "M", "P", "E", "max_ux"});
  for (const auto& s : snaps) w.row({s.t, s.integrals.M, s.integrals.P, s.integrals.E, s.max_ux});
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  const Barotropy law = cfg.barotropy.build();
  const FlowCase fc = require_case(cfg, law);
  const CauchyData data = cfg.data();
  check_data(data, law, log);
  const Constraints cs = determine_constraints(cfg, fc, data, law);
  if (cs.h) cs.h->write_csv(out_path(cfg, "h.csv"), "k", "h");
  if (cs.g) cs.g->write_csv(out_path(cfg, "g.csv"), "r", "g");

  const FlowResult res = solve_cauchy(fc, data, law, as_function(cs.h), as_function(cs.g), cfg.times,
                                      cfg.flow_options());
  for (const auto& s : res.snapshots) {
    write_snapshot_csv(s, out_path(cfg, "snapshot_" + time_tag(s.t) + ".csv"));
    write_plot_data(cfg, s, "");
    log << "t=" << format_double(s.t) << "  nodes=" << s.size() << "  M=" << format_double(s.integrals.M)
        << "  P=" << format_double(s.integrals.P) << "  E=" << format_double(s.integrals.E)
        << "  max|u_x|=" << format_double(s.max_ux) << '\n';
  }
  write_summary(out_path(cfg, "summary.csv"), res.snapshots);
  write_gnuplot(cfg, cfg.times, "");
  report_clamps(cs, log);
  for (const auto& w : res.warnings) log << "warning: " << w << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  const Barotropy law = cfg.barotropy.build();
  const std::uint64_t seed = seed_from_env();
  std::vector<InvariantSpec> specs = catalog(law);
  const std::size_t base = specs.size();
  for (std::size_t i = 0; i < base; ++i) {
    if (specs[i].order < 2) specs.push_back(shift_invariant(specs[i], law));
  }
  CsvWriter w(out_path(cfg, "residuals.csv"), {"invariant", "side", "order", "residual"});
  bool ok = true;
  log << "law " << law.name() << ", " << cfg.verify_samples << " points per invariant, seed " << seed << '\n';
  for (const auto& spec : specs) {
    const SampleSet set = sample_jet_points(spec, law, cfg.verify_samples, seed);
    const double res = invariance_residual(spec, law, set.points);
    const bool pass = res <= cfg.verify_tol;
    ok = ok && pass;
    w.raw(spec.name + "," + side_name(spec.side) + "," + std::to_string(spec.order) + "," + format_double(res));
    log << (pass ? "  ok    " : "  FAIL  ") << spec.label() << "  order " << spec.order << "  residual "
        << format_double(res) << (set.high_rejection ? "  (high sample rejection)" : "") << '\n';
  }
  return ok ? kExitOk : kExitChecksFailed;
}

int cmd_compare(const RunConfig& cfg, std::ostream& log) {
  const Barotropy law = cfg.barotropy.build();
  const FlowCase fc = require_case(cfg, law);
  if (fc != FlowCase::g53 && fc != FlowCase::g75) throw ValidationError("compare runs the g53 and g75 cases only");
  const CauchyData data = cfg.data();
  check_data(data, law, log);
  const Constraints cs = determine_constraints(cfg, fc, data, law);

  const FvState s0 = fv_initial(data, law, cfg.fv_dx);
  // Boundary influence: an edge with an incoming characteristic contaminates
  // a strip growing at the maximal wave speed.
  const double speed = fv_max_speed(s0), t_end = cfg.times.back();
  auto edge = [&](Eigen::Index i) {
    const double u = s0.m[i] / s0.rho[i];
    return std::pair{u - law.sound_speed(s0.rho[i]), u + law.sound_speed(s0.rho[i])};
  };
  const double margin_lo = edge(0).second > 0.0 ? 1.5 * speed * t_end : 0.0;
  const double margin_hi = edge(s0.size() - 1).first < 0.0 ? 1.5 * speed * t_end : 0.0;
  const double lo = cfg.window.lo + margin_lo, hi = cfg.window.hi - margin_hi;
  if (!(hi > lo + 2.0 * s0.dx)) {
    throw ValidationError("window too narrow: boundary influence reaches the whole domain by t=" +
                          format_double(t_end));
  }
  if (margin_lo > 0.0 || margin_hi > 0.0) {
    log << "comparing on [" << format_double(lo) << ", " << format_double(hi) << "] (boundary margin)\n";
  }

  FvOptions fo;
  fo.cfl = cfg.fv_cfl;
  fo.threads = cfg.threads;
  const std::vector<FvState> fv = fv_solve(s0, cfg.times, fo);

  std::vector<double> grid;
  for (Eigen::Index i = 0; i < s0.size(); ++i) {
    if (s0.x[i] >= lo && s0.x[i] <= hi) grid.push_back(s0.x[i]);
  }
  FlowOptions opt = cfg.flow_options();
  opt.grid = grid;
  const FlowResult res = solve_cauchy(fc, data, law, as_function(cs.h), as_function(cs.g), cfg.times, opt);

  CsvWriter norms(out_path(cfg, "compare.csv"), {"t", "l1_rho", "linf_rho", "l1_u", "linf_u"});
  std::vector<SolutionSnapshot> fv_snaps;
  for (std::size_t j = 0; j < cfg.times.size(); ++j) {
    SolutionSnapshot f = to_snapshot(fv[j], law);
    fv_snaps.push_back(f);
    write_snapshot_csv(f, out_path(cfg, "fv_" + time_tag(f.t) + ".csv"));
    write_snapshot_csv(res.snapshots[j], out_path(cfg, "snapshot_" + time_tag(f.t) + ".csv"));
    SolutionSnapshot inner;
    inner.t = f.t;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.x[i] < lo || f.x[i] > hi) continue;
      inner.x.push_back(f.x[i]);
      inner.u.push_back(f.u[i]);
      inner.rho.push_back(f.rho[i]);
      inner.r.push_back(f.r[i]);
      inner.k.push_back(f.k[i]);
    }
    const CompareNorms n = compare(inner, res.snapshots[j]);
    norms.row({f.t, n.l1_rho, n.linf_rho, n.l1_u, n.linf_u});
    log << "t=" << format_double(f.t) << "  rel L1(rho)=" << format_double(n.l1_rho)
        << "  rel Linf(rho)=" << format_double(n.linf_rho) << "  rel L1(u)=" << format_double(n.l1_u)
        << "  rel Linf(u)=" << format_double(n.linf_u) << '\n';
  }
  write_summary(out_path(cfg, "summary_charflow.csv"), res.snapshots);
  write_summary(out_path(cfg, "summary_fv.csv"), fv_snaps);
  report_clamps(cs, log);
  return kExitOk;
}

int cmd_hodograph(const RunConfig& cfg, std::ostream& log) {
  const Barotropy law = cfg.barotropy.build();
  if (!law.gamma() || std::abs(*law.gamma() - 5.0 / 3.0) > 1e-12) {
    throw ValidationError("hodograph needs the polytropic law with gamma=5/3");
  }
  if (cfg.preset != 'a') throw ValidationError("hodograph: the closed-form f1 exists for preset (a) only");
  const CauchyData data = cfg.data();
  check_data(data, law, log);
  RunConfig g53 = cfg;
  g53.flow_case = FlowCase::g53;
  const Constraints cs = determine_constraints(g53, FlowCase::g53, data, law);
  const HodographPair pair{f1_case_a, f2_from_h(as_function(cs.h), cs.h->arg_min(), cs.h->arg_max(),
                                                data.k0.eval(0.0))};
  const std::vector<double> xs = linspace(cfg.hodograph_window.lo, cfg.hodograph_window.hi, cfg.hodograph_n);

  std::optional<FlowResult> flow;
  if (cfg.hodograph_compare) {
    FlowOptions opt = cfg.flow_options();
    opt.grid = xs;
    flow = solve_cauchy(FlowCase::g53, data, law, as_function(cs.h), {}, cfg.times, opt);
  }
  CsvWriter failures(out_path(cfg, "hodograph_failures.csv"), {"t", "x"});
  std::optional<CsvWriter> diff;
  if (flow) diff.emplace(out_path(cfg, "hodograph_compare.csv"), std::vector<std::string>{"t", "linf_r", "linf_k", "coverage"});
  for (std::size_t j = 0; j < cfg.times.size(); ++j) {
    const double t = cfg.times[j];
    const HodographSweep sw = hodograph_solve(pair, data, law, t, xs, cfg.hodograph_time_steps);
    write_snapshot_csv(sw.snapshot, out_path(cfg, "hodograph_" + time_tag(t) + ".csv"));
    for (double x : sw.failed_x) failures.row({t, x});
    log << "t=" << format_double(t) << "  converged " << sw.snapshot.size() << "/" << sw.attempted;
    if (flow) {
      const SolutionSnapshot& cf = flow->snapshots[j];
      double er = 0.0, ek = 0.0;
      std::size_t q = 0;
      for (std::size_t i = 0; i < sw.snapshot.size(); ++i) {
        while (q < cf.size() && cf.x[q] < sw.snapshot.x[i]) ++q;
        if (q == cf.size() || cf.x[q] != sw.snapshot.x[i]) continue;
        er = std::max(er, std::abs(cf.r[q] - sw.snapshot.r[i]));
        ek = std::max(ek, std::abs(cf.k[q] - sw.snapshot.k[i]));
      }
      diff->row({t, er, ek, sw.coverage()});
      log << "  Linf vs charflow: r " << format_double(er) << ", k " << format_double(ek);
    }
    log << '\n';
  }
  return kExitOk;
}

int run_command(const std::string& command, const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    if (command == "solve") return cmd_solve(cfg, log);
    if (command == "verify") return cmd_verify(cfg, log);
    if (command == "compare") return cmd_compare(cfg, log);
    if (command == "hodograph") return cmd_hodograph(cfg, log);
    err << "error: unknown command '" << command << "'\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitChecksFailed;
  }
}

}  // namespace charflow
