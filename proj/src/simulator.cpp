#include "lisim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lisim/error.hpp"

namespace lisim {

MeasurementSeries::MeasurementSeries(std::vector<Measurement> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    if (!(rows_[i].t > rows_[i - 1].t)) {
      throw Error(ErrorKind::invalid_input, "measurement times must increase");
    }
  }
}

MeasurementSeries MeasurementSeries::load_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::io, "cannot open measurements " + file.string());
  std::string line;
  bool header = false, has_T = false;
  std::vector<Measurement> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      if (line.find("V_measured") == std::string::npos) {
        throw Error(ErrorKind::invalid_input, "measurement header must name t_s,V_measured");
      }
      has_T = line.find("T_measured") != std::string::npos;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    Measurement m;
    if (!(is >> m.t >> m.V)) throw Error(ErrorKind::invalid_input, "bad measurement row");
    double T;
    if (has_T && (is >> T)) m.T = T;
    rows.push_back(m);
  }
  return MeasurementSeries(std::move(rows));
}

MeasurementSeries MeasurementSeries::from_trajectory(const Trajectory& t) {
  std::vector<Measurement> rows;
  rows.reserve(t.records.size());
  for (const StepRecord& r : t.records) rows.push_back({r.t, r.V, r.T});
  return MeasurementSeries(std::move(rows));
}

std::optional<Measurement> MeasurementSeries::at(double t) const {
  if (rows_.empty() || t < rows_.front().t - 1e-9 || t > rows_.back().t + 1e-9) return std::nullopt;
  auto it = std::lower_bound(rows_.begin(), rows_.end(), t,
                             [](const Measurement& m, double v) { return m.t < v; });
  if (it == rows_.end()) return rows_.back();
  if (it == rows_.begin() || std::abs(it->t - t) < 1e-9) return *it;
  const Measurement& b = *it;
  const Measurement& a = *std::prev(it);
  const double w = (t - a.t) / (b.t - a.t);
  Measurement m{t, a.V + w * (b.V - a.V), std::nullopt};
  if (a.T && b.T) m.T = *a.T + w * (*b.T - *a.T);
  return m;
}

Simulator::Simulator(CellParameters p, OcpPair ocp, SimulatorConfig cfg)
    : Simulator(p, ocp, solve_window(p, ocp), cfg) {}

Simulator::Simulator(CellParameters p, OcpPair ocp, StoichiometryWindow w, SimulatorConfig cfg)
    : engine_(std::move(p), std::move(ocp), w, cfg.engine), cfg_(cfg) {
  cfg_.sgf.validate();
}

Trajectory Simulator::run(const Scenario& s, const MeasurementSeries* measurements) const {
  return run_from(engine_.initial_state(s.soc0, s.T_amb), s, measurements);
}

Trajectory Simulator::run_from(CellState state, const Scenario& s,
                               const MeasurementSeries* measurements) const {
  const CellParameters& p = engine_.params();
  const CorrectorConfig& cc = cfg_.engine.corrector;
  Stabilizer stab(cfg_.sgf);
  Trajectory traj;
  traj.model = "reduced";
  traj.params = p.name;

  auto step = [&](const StepInput& in, double guess) {
    in.validate();
    const double I = in.mode == StepInput::Mode::current
                         ? in.value
                         : engine_.cv_hold_current(state, in.value, in.T_amb, in.dt, guess);
    Engine::Result r = engine_.step_current(state, I, in.T_amb, in.dt);
    state = r.state;
    StepRecord rec = r.record;

    if (cfg_.stabilize && stab.update(p, state, rec.css)) {
      const Snapshot snap = engine_.evaluate(state, I);
      StepRecord smoothed = engine_.make_record(state, snap);
      smoothed.flags |= rec.flags | flag::smoothed;
      smoothed.correction_li_change = rec.correction_li_change;
      rec = smoothed;
    }

    if (measurements) {
      if (const auto m = measurements->at(rec.t)) {
        if (m->T && cc.override_temperature) state.T = *m->T;
        if (std::abs(rec.V - m->V) > cc.threshold) {
          const Snapshot snap = engine_.evaluate(state, I);
          const double ocv = back_out_ocv(p, m->V, snap.voltage, snap.at_neg, snap.at_pos,
                                          snap.T, I);
          const double y_neg = snap.css[0] / p.neg.cs_max;
          const double y_pos = snap.css[7] / p.pos.cs_max;
          try {
            const Correction c = solve_correction(p, engine_.ocp(), ocv, y_neg, y_pos, cc.max_dy_pos);
            issue_correction(p, cc, state, c, in.dt);
            if (c.limited) rec.flags |= flag::correction_out_of_range;
          } catch (const Error&) {
            rec.flags |= flag::correction_out_of_range;
          }
        }
      }
    }
    return rec;
  };
  drive_scenario(s, p, step, traj);
  return traj;
}

}  // namespace lisim
