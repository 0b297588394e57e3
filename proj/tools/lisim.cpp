// lisim: command-line front end for the reduced model and the P2D oracle.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lisim/error.hpp"
#include "lisim/init.hpp"
#include "lisim/metrics.hpp"
#include "lisim/oracle.hpp"
#include "lisim/param_file.hpp"
#include "lisim/simulator.hpp"

namespace {

using namespace lisim;

constexpr int kExitModel = 1;
constexpr int kExitUsage = 2;

// Thrown for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunArgs {
  std::string params;
  std::string scenario;
  std::optional<double> soc0;
  std::optional<double> ocv0;
  std::string out;
  double dt = 0.0;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--params", a.params, "preset name or parameter YAML")->required();
  cmd->add_option("--scenario", a.scenario, "built-in scenario name or scenario YAML")->required();
  auto* soc = cmd->add_option("--soc0", a.soc0, "initial SOC in [0,1]");
  auto* ocv = cmd->add_option("--ocv0", a.ocv0, "initial open-circuit voltage, V");
  soc->excludes(ocv);
  cmd->add_option("--out", a.out, "trajectory CSV (stdout when omitted)");
  cmd->add_option("--dt", a.dt, "override the scenario time step, s");
}

struct Setup {
  CellParameters p;
  OcpPair ocp;
  StoichiometryWindow w;
  Scenario scenario;
};

Setup prepare(const RunArgs& a) {
  CellParameters p = resolve_parameters(a.params);
  OcpPair ocp = load_ocp_pair(p);
  const StoichiometryWindow w = solve_window(p, ocp);
  Scenario sc = resolve_scenario(a.scenario, p);
  Setup s{std::move(p), std::move(ocp), w, std::move(sc)};
  if (a.soc0) s.scenario.soc0 = *a.soc0;
  if (a.ocv0) s.scenario.soc0 = soc_from_ocv(s.ocp, s.w, *a.ocv0);
  if (a.dt > 0) s.scenario.dt = a.dt;
  s.scenario.validate();
  return s;
}

int emit(const Trajectory& t, const std::string& out) {
  if (out.empty()) {
    write_trajectory_csv(std::cout, t);
  } else {
    write_trajectory_csv(out, t);
  }
  std::fprintf(stderr, "%s: %zu steps, stop=%s\n", t.model.c_str(), t.records.size(),
               t.stop_reason.c_str());
  if (t.failed()) {
    std::fprintf(stderr, "model error: %s\n", t.error.c_str());
    return kExitModel;
  }
  return 0;
}

std::optional<JnMode> parse_jn_mode(const std::string& s) {
  if (s == "auto") return std::nullopt;
  if (s == "analytic") return JnMode::analytic;
  if (s == "uniform") return JnMode::uniform;
  throw UsageError("--jn-mode must be auto, analytic or uniform");
}

std::vector<int> parse_mesh(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
  if (v.size() != 4) throw UsageError("--mesh expects n_neg,n_sep,n_pos,n_r");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced electrochemical cell model with a P2D reference solver"};
  app.require_subcommand(1);

  RunArgs sim_args;
  bool closed_loop = false, strict = false, no_sgf = false;
  std::string measurements, jn_mode = "auto";
  auto* sim = app.add_subcommand("simulate", "run the reduced model over a scenario");
  add_run_options(sim, sim_args);
  sim->add_flag("--closed-loop", closed_loop, "correct states from measured voltage");
  sim->add_option("--measurements", measurements, "CSV with t_s, V_measured[, T_measured]");
  sim->add_option("--jn-mode", jn_mode, "auto | analytic | uniform");
  sim->add_flag("--strict", strict, "turn clamps and saturation into errors");
  sim->add_flag("--no-sgf", no_sgf, "disable the oscillation stabilizer");

  RunArgs p2d_args;
  std::string mesh;
  auto* p2d = app.add_subcommand("p2d", "run the P2D oracle over a scenario");
  add_run_options(p2d, p2d_args);
  p2d->add_option("--mesh", mesh, "n_neg,n_sep,n_pos,n_r (default 51,11,51,18)");

  std::string ref_file, est_file, report_file, cmp_params;
  std::vector<std::string> fields;
  auto* cmp = app.add_subcommand("compare", "metrics of an estimate against a reference trajectory");
  cmp->add_option("--reference", ref_file, "reference trajectory CSV")->required();
  cmp->add_option("--estimate", est_file, "estimated trajectory CSV")->required();
  cmp->add_option("--fields", fields, "comma list of V I T SOC Qh ce css cs_bulk jn x_ss x_bulk")
      ->delimiter(',');
  cmp->add_option("--params", cmp_params, "parameters, needed for x_ss / x_bulk");
  cmp->add_option("--out", report_file, "report CSV (stdout when omitted)");

  std::string socv_params, socv_out;
  int socv_points = 201;
  auto* socv = app.add_subcommand("socv", "export the SOC-OCV table");
  socv->add_option("--params", socv_params, "preset name or parameter YAML")->required();
  socv->add_option("--points", socv_points, "table rows")->check(CLI::Range(2, 100000));
  socv->add_option("--out", socv_out, "CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim) {
      if (closed_loop && measurements.empty()) throw UsageError("--closed-loop needs --measurements");
      if (!closed_loop && !measurements.empty()) throw UsageError("--measurements needs --closed-loop");
      SimulatorConfig cfg;
      const auto mode = parse_jn_mode(jn_mode);
      cfg.engine.jn_mode = {mode, mode};
      cfg.engine.strict = strict;
      cfg.stabilize = !no_sgf;
      Setup s = prepare(sim_args);
      Simulator simulator(s.p, s.ocp, s.w, cfg);
      Trajectory t;
      if (closed_loop) {
        const MeasurementSeries m = MeasurementSeries::load_csv(measurements);
        t = simulator.run(s.scenario, &m);
      } else {
        t = simulator.run(s.scenario);
      }
      if (strict && t.failed()) {
        emit(t, sim_args.out);
        return kExitModel;
      }
      return emit(t, sim_args.out);
    }
    if (*p2d) {
      P2DConfig cfg;
      if (!mesh.empty()) {
        const auto m = parse_mesh(mesh);
        cfg.mesh = {m[0], m[1], m[2], m[3]};
      }
      Setup s = prepare(p2d_args);
      P2DSolver solver(s.p, s.ocp, s.w, cfg);
      return emit(solver.run(s.scenario), p2d_args.out);
    }
    if (*cmp) {
      const Trajectory a = read_trajectory_csv(ref_file);
      const Trajectory b = read_trajectory_csv(est_file);
      CompareOptions opt;
      if (!fields.empty()) opt.fields = fields;
      if (!cmp_params.empty()) {
        const CellParameters p = resolve_parameters(cmp_params);
        opt.cs_max = std::array<double, 2>{p.neg.cs_max, p.pos.cs_max};
        if (fields.empty()) {
          opt.fields.push_back("x_ss");
          opt.fields.push_back("x_bulk");
        }
      }
      const auto rows = compare_trajectories(a, b, opt);
      if (report_file.empty()) {
        write_metric_report(std::cout, rows);
      } else {
        std::ofstream out(report_file);
        if (!out) throw Error(ErrorKind::io, "cannot write " + report_file);
        write_metric_report(out, rows);
      }
      return 0;
    }
    if (*socv) {
      const CellParameters p = resolve_parameters(socv_params);
      const OcpPair ocp = load_ocp_pair(p);
      const StoichiometryWindow w = solve_window(p, ocp);
      const SocOcvTable table = soc_ocv_curve(w, ocp, socv_points);
      std::ofstream file;
      if (!socv_out.empty()) {
        file.open(socv_out);
        if (!file) throw Error(ErrorKind::io, "cannot write " + socv_out);
      }
      std::ostream& out = socv_out.empty() ? std::cout : file;
      out << "SOC,OCV_V\n";
      char buf[64];
      for (std::size_t i = 0; i < table.soc.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", table.soc[i], table.ocv[i]);
        out << buf;
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s error: %s\n", to_string(e.kind()), e.what());
    return e.kind() == ErrorKind::io || e.kind() == ErrorKind::invalid_input ? kExitUsage
                                                                              : kExitModel;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitModel;
  }
  return 0;
}
