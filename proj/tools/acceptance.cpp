// Acceptance report: one PASS/FAIL line per criterion. Exit status is 0 once every check
// has run, so the report itself carries the verdict.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "lisim/error.hpp"
#include "lisim/metrics.hpp"
#include "lisim/oracle.hpp"
#include "lisim/param_file.hpp"
#include "lisim/simulator.hpp"
#include "lisim/stabilizer.hpp"

using namespace lisim;

namespace {

struct Cell {
  CellParameters p;
  OcpPair ocp;
  StoichiometryWindow w;
};

const Cell& cell(const std::string& name) {
  static std::map<std::string, Cell> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    CellParameters p = preset(name);
    OcpPair ocp = load_ocp_pair(p);
    StoichiometryWindow w = solve_window(p, ocp);
    it = cache.emplace(name, Cell{std::move(p), std::move(ocp), w}).first;
  }
  return it->second;
}

const std::vector<std::string> kChemistries{"ncm523", "ncm811", "lfpo"};

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  if (!ok) ++failures;
  std::printf("%s %2d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Scenario constant_current(const CellParameters& p, double c_rate, double dt) {
  Scenario s;
  s.name = "cc";
  s.dt = dt;
  Phase ph;
  ph.current = c_rate * p.one_c_current();
  s.phases.push_back(ph);
  return s;
}

void runtime() {
  const Cell& c = cell("ncm523");
  SimulatorConfig cfg;
  cfg.engine.audit_jn_integral = false;
  Simulator sim(c.p, c.ocp, c.w, cfg);
  const Scenario s = builtin_scenario("cc_1c", c.p);
  sim.run(s);  // warm caches
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory t = sim.run(s);
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(1, sec < 2.0 && !t.failed(),
         fmt("runtime: 1C discharge, %zu steps in %.3f s (limit 2 s)", t.records.size(), sec));
}

void conservation_and_bookkeeping() {
  double worst_qe = 0.0, worst_coulomb = 0.0, worst_jn = 0.0;
  std::string where_qe, where_c, where_jn;
  bool failed = false;
  for (const auto& chem : kChemistries) {
    const Cell& c = cell(chem);
    for (const auto& name : builtin_scenarios()) {
      const Scenario s = builtin_scenario(name, c.p);
      Simulator sim(c.p, c.ocp, c.w);
      const Trajectory t = sim.run(s);
      failed = failed || t.failed();
      const double q0 = c.p.initial_electrolyte_total();
      for (const auto& r : t.records) {
        const double e = std::abs(r.qe_neg + r.qe_pos - q0) / q0;
        if (e > worst_qe) {
          worst_qe = e;
          where_qe = chem + "/" + name;
        }
      }
      // solid lithium moved out of each electrode against the charge passed
      const CellState s0 = sim.engine().initial_state(s.soc0, s.T_amb);
      double charge = 0.0, throughput = 0.0, prev_t = 0.0;
      for (const auto& r : t.records) {
        charge += r.I * (r.t - prev_t);
        throughput += std::abs(r.I) * (r.t - prev_t);
        prev_t = r.t;
      }
      const StepRecord& last = t.records.back();
      const double moles = charge / c.p.faraday;
      const double scale = std::max(std::abs(moles), 1e-3 * throughput / c.p.faraday);
      const auto avg = [](const std::array<double, 8>& v, int off) {
        return electrode_average(std::span<const double, 4>(v.data() + off, 4));
      };
      const double dn = c.p.neg.area * c.p.neg.thickness * c.p.neg.eps_s *
                        (avg(last.cs_bulk, 0) - electrode_average(s0.solid.neg.bulk));
      const double dp = c.p.pos.area * c.p.pos.thickness * c.p.pos.eps_s *
                        (avg(last.cs_bulk, 4) - electrode_average(s0.solid.pos.bulk));
      const double ec = std::max(std::abs(-dn - moles), std::abs(dp - moles)) / scale;
      if (ec > worst_coulomb) {
        worst_coulomb = ec;
        where_c = chem + "/" + name;
      }

      // every electrode on the analytic profile is audited; LFP positives run uniform
      for (const auto& r : t.records) {
        if (r.jn_integral_error > worst_jn) {
          worst_jn = r.jn_integral_error;
          where_jn = chem + "/" + name;
        }
      }
    }
  }
  report(2, !failed && worst_qe < 1e-3,
         fmt("electrolyte conservation: worst |dQe|/Qe0 = %.2e (%s), limit 1e-3", worst_qe,
             where_qe.c_str()));
  report(3, !failed && worst_coulomb < 0.01,
         fmt("Coulomb bookkeeping: worst relative mismatch %.2e (%s), limit 1e-2", worst_coulomb,
             where_c.c_str()));
  report(4, !failed && worst_jn < 1e-6,
         fmt("jn boundary identity: worst relative error %.2e (%s), limit 1e-6", worst_jn,
             where_jn.c_str()));
}

void oracle_agreement() {
  const Cell& c = cell("ncm523");
  Simulator sim(c.p, c.ocp, c.w);
  P2DSolver ora(c.p, c.ocp, c.w);
  CompareOptions opt;
  opt.fields = {"V", "jn", "x_bulk", "x_ss"};
  opt.cs_max = std::array<double, 2>{c.p.neg.cs_max, c.p.pos.cs_max};

  const Scenario fast = builtin_scenario("cc_1c", c.p);
  const Trajectory ref = ora.run(fast), est = sim.run(fast);
  const auto rows = compare_trajectories(ref, est, opt);
  const MetricRow& v = find_metric(rows, "V");

  // C/25 at 1 s: the explicit surface update is not stable at 10 s on the steep graphite tail
  const Scenario slow = constant_current(c.p, 1.0 / 25.0, 1.0);
  const Trajectory ref_s = ora.run(slow), est_s = sim.run(slow);
  const MetricRow& vs = find_metric(compare_trajectories(ref_s, est_s, opt), "V");
  const bool ok5 = !ref.failed() && !est.failed() && !ref_s.failed() && !est_s.failed() &&
                   v.rmse < 0.05 && v.r2 > 0.95 && vs.rmse < 0.005;
  report(5, ok5,
         fmt("oracle voltage: 1C RMSE %.2f mV R2 %.5f; C/25 RMSE %.3f mV", 1e3 * v.rmse, v.r2,
             1e3 * vs.rmse));

  double jn_r2 = 1.0, xb = 0.0, xs_r2 = 1.0;
  for (const char* lbl : kPointLabels) {
    const std::string pos(lbl);
    if (pos.rfind("neg", 0) == 0) jn_r2 = std::min(jn_r2, find_metric(rows, "jn", pos).r2);
    xb = std::max(xb, find_metric(rows, "x_bulk", pos).rmse);
    xs_r2 = std::min(xs_r2, find_metric(rows, "x_ss", pos).r2);
  }
  report(6, jn_r2 > 0.7 && xb < 2e-2 && xs_r2 > 0.85,
         fmt("internal states, 1C: min neg jn R2 %.4f; max x_bulk RMSE %.2e; min x_ss R2 %.5f",
             jn_r2, xb, xs_r2));
}

void rest_relaxation() {
  double worst_v = 0.0, worst_w = 0.0;
  for (const auto& chem : kChemistries) {
    const Cell& c = cell(chem);
    Engine eng(c.p, c.ocp, c.w);
    CellState s = eng.initial_state(0.8, 298);
    for (int k = 0; k < 60; ++k) s = eng.step_current(s, c.p.one_c_current(), 298, 1.0).state;
    auto max_w = [](const CellState& st) {
      double m = 0.0;
      for (double x : st.solid.neg.offset) m = std::max(m, std::abs(x));
      for (double x : st.solid.pos.offset) m = std::max(m, std::abs(x));
      return m;
    };
    const double w0 = max_w(s);
    Engine::Result r{s, {}};
    for (int k = 0; k < 3600; ++k) r = eng.step_current(r.state, 0.0, 298, 1.0);
    worst_v = std::max(worst_v, std::abs(r.record.V - ocv_at_soc(c.ocp, c.w, eng.soc(r.state))));
    worst_w = std::max(worst_w, max_w(r.state) / w0);
  }
  report(7, worst_v < 1e-3 && worst_w < 0.01,
         fmt("rest relaxation, 60 s 1C pulse then 1 h: |V-OCV| %.3f mV, |w| at %.2e of pulse value",
             1e3 * worst_v, worst_w));
}

void sgf_suite() {
  const Eigen::MatrixXd B5 = sg_matrix(2, 5);
  const double w[5] = {-3, 12, 17, 12, -3};
  double e_w = 0.0;
  for (int j = 0; j < 5; ++j) e_w = std::max(e_w, std::abs(B5(2, j) - w[j] / 35.0));

  const SGFConfig cfg;
  const Eigen::MatrixXd B = sg_matrix(cfg.order, cfg.window);
  const double e_idem = (B * B - B).cwiseAbs().maxCoeff();

  const int m = cfg.window;
  std::vector<double> quad(m), noisy(m), base(m);
  for (int k = 0; k < m; ++k) {
    quad[k] = 2e4 - 7.0 * k + 0.03 * k * k;
    base[k] = 1.5e4 + 4.0 * k;
    noisy[k] = base[k] + (k % 2 ? 1.0 : -1.0) * 150.0;
  }
  const auto q = smooth_tail(quad, B);
  double e_pass = 0.0;
  for (int k = 0; k < m; ++k) e_pass = std::max(e_pass, std::abs(q[k] - quad[k]) / 2e4);
  const auto sm = smooth_tail(noisy, B);
  const double centre = std::abs(sm[m / 2] - base[m / 2]);
  const double atten = 150.0 / std::max(centre, 1e-300);

  report(8, e_idem < 1e-10 && e_pass < 1e-9 && atten >= 10.0 && e_w < 1e-12,
         fmt("SGF: |B^2-B| %.1e; passthrough %.1e; Nyquist attenuation %.1e x; 5-point weights "
             "%.1e",
             e_idem, e_pass, atten, e_w));
}

void closed_loop() {
  const Cell& c = cell("ncm523");
  Simulator sim(c.p, c.ocp, c.w);
  P2DSolver ora(c.p, c.ocp, c.w);
  const Scenario truth_s = builtin_scenario("acc", c.p);
  const Trajectory truth = ora.run(truth_s);
  const MeasurementSeries meas = MeasurementSeries::from_trajectory(truth);
  Scenario wrong = truth_s;
  wrong.soc0 = 0.2;
  const Trajectory est = sim.run(wrong, &meas);
  const MetricRow v = find_metric(compare_trajectories(truth, est), "V");

  // fit after the voltage first comes inside the correction threshold
  const double thr = sim.config().engine.corrector.threshold;
  std::size_t k0 = 0;
  while (k0 < est.records.size() && std::abs(est.records[k0].V - truth.records[k0].V) > thr) ++k0;
  Trajectory tail = est;
  tail.records.erase(tail.records.begin(), tail.records.begin() + static_cast<long>(k0));
  const MetricRow vt = find_metric(compare_trajectories(truth, tail), "V");
  const double soc_err = std::abs(est.records.back().soc - truth.records.back().soc);

  double li = 0.0;
  for (const auto& r : est.records) li = std::max(li, std::abs(r.correction_li_change));

  report(9, !est.failed() && v.r2 > 0.99 && soc_err < 0.03,
         fmt("closed loop from SOC 0.2 (truth 0.7): V R2 %.4f over the run, %.4f from t = %.0f s; "
             "final SOC error %.4f",
             v.r2, vt.r2, tail.records.empty() ? 0.0 : tail.records.front().t, soc_err));
  report(10, li < 1e-12,
         fmt("correction mass neutrality: worst relative solid lithium change %.1e", li));
}

void oracle_gates() {
  const Cell& c = cell("ncm523");
  P2DSolver ora(c.p, c.ocp, c.w);
  P2DState s = ora.initial_state(1.0, 298);
  const double li0 = ora.total_lithium(s);
  const double I = c.p.one_c_current();
  double charge = 0.0;
  StepRecord r;
  do {
    r = ora.step(s, I, 298, 1.0);
    charge = std::max(charge, r.jn_integral_error);
  } while (r.V > c.p.operating.v_min);
  do {
    r = ora.step(s, -I, 298, 1.0);
    charge = std::max(charge, r.jn_integral_error);
  } while (r.V < c.p.operating.v_max);
  const double drift = std::abs(ora.total_lithium(s) - li0) / li0;

  // both meshes stop on the same cut-off, so compare at the last time both still run
  P2DConfig fine_cfg;
  fine_cfg.mesh = P2DMesh{}.scaled_x(2).scaled_r(2);
  P2DSolver fine(c.p, c.ocp, c.w, fine_cfg);
  const Scenario sc = builtin_scenario("cc_1c", c.p);
  const Trajectory a = ora.run(sc), b = fine.run(sc);
  const std::size_t n = std::min(a.records.size(), b.records.size());
  const double dv = std::abs(a.records[n - 2].V - b.records[n - 2].V);

  report(11, drift < 1e-6 && dv < 1e-3 && charge < 1e-8,
         fmt("oracle gates: lithium drift %.1e per cycle; mesh doubling %.3f mV at t = %.0f s; "
             "charge balance %.1e",
             drift, 1e3 * dv, a.records[n - 2].t, charge));
}

void metrics_example() {
  const std::vector<double> y{0, 1, 2}, yh{0, 1, 3};
  const double a = r2(y, yh), m = mae(y, yh), e = rmse(y, yh);
  const bool ok = std::abs(a - 0.5) < 1e-15 && std::abs(m - 1.0 / 3.0) < 1e-15 &&
                  std::abs(e - std::sqrt(1.0 / 3.0)) < 1e-15;
  report(12, ok, fmt("metrics example: R2 %.6f MAE %.6f RMSE %.6f", a, m, e));
}

}  // namespace

int main() {
  try {
    runtime();
    conservation_and_bookkeeping();
    oracle_agreement();
    rest_relaxation();
    sgf_suite();
    closed_loop();
    oracle_gates();
    metrics_example();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d of 12 criteria failed\n", failures);
  return 0;
}
