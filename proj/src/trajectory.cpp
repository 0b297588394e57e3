#include "lisim/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "lisim/error.hpp"

namespace lisim {

std::vector<std::string> trajectory_columns() {
  std::vector<std::string> cols{"t_s", "I_A", "V_V", "T_K", "SOC"};
  for (const char* q : {"ce", "css", "cs_bulk", "jn"}) {
    for (const char* lbl : kPointLabels) cols.push_back(std::string(q) + "_" + lbl);
  }
  for (const char* c : {"Qe_neg_mol", "Qe_pos_mol", "Qh_W", "flags"}) cols.emplace_back(c);
  return cols;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  out << "# model=" << t.model << " scenario=" << t.scenario << " params=" << t.params
      << " soc0=" << t.soc0 << " seed=" << t.seed << " stop=" << t.stop_reason << "\n";
  if (!t.error.empty()) out << "# error=" << t.error << "\n";
  const auto cols = trajectory_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out << ',' << buf;
  };
  for (const StepRecord& r : t.records) {
    std::snprintf(buf, sizeof buf, "%.10g", r.t);
    out << buf;
    num(r.I);
    num(r.V);
    num(r.T);
    num(r.soc);
    for (const auto* arr : {&r.ce, &r.css, &r.cs_bulk, &r.jn}) {
      for (double v : *arr) num(v);
    }
    num(r.qe_neg);
    num(r.qe_pos);
    num(r.heat);
    out << ',' << r.flags << "\n";
  }
}

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& t) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorKind::io, "cannot write " + file.string());
  write_trajectory_csv(out, t);
}

Trajectory read_trajectory_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::io, "cannot open trajectory " + file.string());
  Trajectory t;
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string kv;
      while (is >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const auto k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "model") t.model = v;
        else if (k == "scenario") t.scenario = v;
        else if (k == "params") t.params = v;
        else if (k == "stop") t.stop_reason = v;
        else if (k == "seed") t.seed = std::stoull(v);
        else if (k == "soc0") t.soc0 = std::stod(v);
      }
      continue;
    }
    if (header.empty()) {
      std::istringstream is(line);
      std::string c;
      while (std::getline(is, c, ',')) header.push_back(c);
      if (header != trajectory_columns()) {
        throw Error(ErrorKind::invalid_input, file.string() + ": unexpected trajectory columns");
      }
      continue;
    }
    std::vector<double> v;
    v.reserve(header.size());
    std::istringstream is(line);
    std::string c;
    while (std::getline(is, c, ',')) v.push_back(std::stod(c));
    if (v.size() != header.size()) {
      throw Error(ErrorKind::invalid_input, file.string() + ": short row");
    }
    StepRecord r;
    std::size_t k = 0;
    r.t = v[k++];
    r.I = v[k++];
    r.V = v[k++];
    r.T = v[k++];
    r.soc = v[k++];
    for (auto* arr : {&r.ce, &r.css, &r.cs_bulk, &r.jn}) {
      for (double& x : *arr) x = v[k++];
    }
    r.qe_neg = v[k++];
    r.qe_pos = v[k++];
    r.heat = v[k++];
    r.flags = static_cast<std::uint32_t>(v[k++]);
    t.records.push_back(r);
  }
  if (header.empty()) throw Error(ErrorKind::invalid_input, file.string() + ": no header");
  return t;
}

void drive_scenario(const Scenario& s, const CellParameters& p, const StepFunction& step,
                    Trajectory& out) {
  s.validate();
  out.scenario = s.name;
  out.seed = s.seed;
  out.soc0 = s.soc0;
  out.stop_reason = "completed";
  double t_total = 0.0;
  double last_I = 0.0;
  try {
    for (std::size_t k = 0; k < s.phases.size(); ++k) {
      const Phase& ph = s.phases[k];
      double t_phase = 0.0;
      while (true) {
        if (t_total >= s.max_time - 1e-9) {
          out.stop_reason = "max_time";
          return;
        }
        const double remaining = ph.duration - t_phase;
        if (remaining <= 1e-9) break;
        double dt = std::min(s.dt, remaining);
        StepInput in = StepInput::current(0.0, s.T_amb, dt);
        switch (ph.kind) {
          case Phase::Kind::cc: in.value = ph.current; break;
          case Phase::Kind::rest: break;
          case Phase::Kind::cv:
            in.mode = StepInput::Mode::voltage;
            in.value = ph.voltage;
            break;
          case Phase::Kind::profile: {
            in.value = ph.profile_current(t_phase + 1e-12);
            // do not straddle a segment boundary
            for (const ProfileSample& smp : ph.samples) {
              if (smp.t > t_phase + 1e-9) {
                dt = std::min(dt, smp.t - t_phase);
                break;
              }
            }
            in.dt = dt;
            break;
          }
        }
        StepRecord rec = step(in, last_I);
        last_I = rec.I;
        t_phase += dt;
        t_total += dt;
        out.records.push_back(rec);
        if (rec.I > 0 && rec.V <= p.operating.v_min) {
          out.stop_reason = "v_min";
          return;
        }
        if (ph.kind == Phase::Kind::cc && rec.I < 0 && rec.V >= p.operating.v_max) {
          out.stop_reason = "v_max";
          break;
        }
        if (ph.kind == Phase::Kind::cv && std::abs(rec.I) < ph.stop_current) {
          out.stop_reason = "current_cutoff";
          break;
        }
      }
      if (k + 1 < s.phases.size()) out.stop_reason = "completed";
    }
  } catch (const Error& e) {
    out.stop_reason = "error";
    out.error = std::string(to_string(e.kind())) + ": " + e.what();
  }
}

}  // namespace lisim
