#include "lisim/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "lisim/error.hpp"
#include "lisim/param_file.hpp"

namespace lisim {

namespace {

constexpr std::uint64_t kRcSeed = 20240611;

Error bad(const std::string& what) { return Error(ErrorKind::invalid_input, "scenario: " + what); }

void check_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw bad("unknown key '" + key + "' in " + where);
  }
}

Phase cc(double I, double duration = std::numeric_limits<double>::infinity()) {
  Phase ph;
  ph.kind = Phase::Kind::cc;
  ph.current = I;
  ph.duration = duration;
  return ph;
}

Phase profile(std::vector<ProfileSample> s) {
  Phase ph;
  ph.kind = Phase::Kind::profile;
  ph.samples = std::move(s);
  ph.duration = ph.profile_end();
  return ph;
}

bool is_lfp(const CellParameters& p) { return p.pos.ocp == "lfpo" || p.pos.ocp == "lfp"; }

}  // namespace

const char* to_string(Phase::Kind k) noexcept {
  switch (k) {
    case Phase::Kind::cc: return "cc";
    case Phase::Kind::cv: return "cv";
    case Phase::Kind::rest: return "rest";
    case Phase::Kind::profile: return "profile";
  }
  return "?";
}

double Phase::profile_current(double t) const noexcept {
  if (samples.empty()) return 0.0;
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double v, const ProfileSample& s) { return v < s.t; });
  if (it == samples.begin()) return samples.front().I;
  return std::prev(it)->I;
}

double Phase::profile_end() const noexcept { return samples.empty() ? 0.0 : samples.back().t; }

void Scenario::validate() const {
  if (phases.empty()) throw bad("no phases");
  if (!(dt > 0 && dt <= 10.0)) throw bad("dt must lie in (0, 10] s");
  if (!(T_amb > 0)) throw bad("ambient temperature must be positive");
  if (!(soc0 >= 0 && soc0 <= 1)) throw bad("soc0 must lie in [0,1]");
  for (const Phase& ph : phases) {
    if (!(ph.duration > 0)) throw bad("phase duration must be positive");
    switch (ph.kind) {
      case Phase::Kind::cc:
        if (!std::isfinite(ph.current)) throw bad("cc phase needs a finite current");
        break;
      case Phase::Kind::cv:
        if (!(ph.voltage > 0)) throw bad("cv phase needs a positive voltage");
        if (!(ph.stop_current >= 0)) throw bad("cv stop current must be >= 0");
        if (ph.stop_current == 0 && std::isinf(ph.duration)) {
          throw bad("cv phase needs a stop current or a duration");
        }
        break;
      case Phase::Kind::rest:
        if (std::isinf(ph.duration)) throw bad("rest phase needs a duration");
        break;
      case Phase::Kind::profile:
        if (ph.samples.size() < 2) throw bad("profile needs at least two rows");
        for (std::size_t i = 1; i < ph.samples.size(); ++i) {
          if (!(ph.samples[i].t > ph.samples[i - 1].t)) throw bad("profile times must increase");
        }
        if (ph.samples.front().t != 0.0) throw bad("profile must start at t = 0");
        break;
    }
  }
}

std::vector<std::string> builtin_scenarios() {
  return {"cc_1c", "cc_2c", "cc_4c", "cccv", "acc", "rc", "cc_1c_273k", "cc_1c_313k"};
}

std::vector<ProfileSample> acc_profile(double one_c) {
  // (C-rate, seconds)
  static constexpr std::array<std::pair<double, double>, 14> blocks{{
      {1.0, 120}, {0.0, 30}, {-1.0, 60}, {2.0, 90}, {0.0, 40}, {-2.0, 40}, {3.0, 60},
      {0.0, 60}, {-0.5, 100}, {1.5, 120}, {0.0, 50}, {-3.0, 30}, {2.0, 100}, {0.0, 100}}};
  std::vector<ProfileSample> out;
  double t = 0.0;
  for (const auto& [c, d] : blocks) {
    out.push_back({t, c * one_c});
    t += d;
  }
  out.push_back({t, 0.0});
  return out;
}

std::vector<ProfileSample> rc_profile(double one_c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(3, 15);
  std::uniform_real_distribution<double> rate(-1.0, 3.0);
  std::vector<ProfileSample> out;
  constexpr double total = 217.0;
  double t = 0.0;
  while (t < total) {
    out.push_back({t, rate(rng) * one_c});
    t = std::min(total, t + len(rng));
  }
  out.push_back({total, 0.0});
  return out;
}

Scenario builtin_scenario(std::string_view name, const CellParameters& p) {
  const double c1 = p.one_c_current();
  Scenario s;
  s.name = std::string(name);
  if (name == "cc_1c" || name == "cc_2c" || name == "cc_4c") {
    const double rate = name == "cc_1c" ? 1.0 : name == "cc_2c" ? 2.0 : 4.0;
    s.phases.push_back(cc(rate * c1));
  } else if (name == "cc_1c_273k" || name == "cc_1c_313k") {
    s.T_amb = name == "cc_1c_273k" ? 273.0 : 313.0;
    s.phases.push_back(cc(c1));
  } else if (name == "cccv") {
    s.soc0 = 0.0;
    s.phases.push_back(cc(-c1));
    Phase cv;
    cv.kind = Phase::Kind::cv;
    cv.voltage = p.operating.v_max;
    cv.stop_current = c1 / 20.0;
    s.phases.push_back(cv);
  } else if (name == "acc") {
    s.soc0 = is_lfp(p) ? 1.0 : 0.7;
    s.phases.push_back(profile(acc_profile(c1)));
  } else if (name == "rc") {
    s.seed = kRcSeed;
    s.phases.push_back(profile(rc_profile(c1, kRcSeed)));
  } else {
    throw bad("unknown built-in scenario '" + std::string(name) + "'");
  }
  s.validate();
  return s;
}

std::vector<ProfileSample> load_profile_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::io, "cannot open profile " + file.string());
  std::string line;
  std::vector<ProfileSample> out;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      if (line.find("t_s") == std::string::npos) throw bad("profile header must name t_s,I_A");
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    ProfileSample s;
    if (!(is >> s.t >> s.I)) throw bad("malformed profile row '" + line + "'");
    out.push_back(s);
  }
  if (out.size() < 2) throw bad("profile " + file.string() + " has fewer than two rows");
  return out;
}

Scenario parse_scenario(const std::string& yaml_text, const CellParameters& p,
                        const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw bad(std::string("YAML: ") + e.what());
  }
  if (!root.IsMap()) throw bad("document must be a mapping");
  check_keys(root, {"name", "ambient_K", "dt", "soc0", "max_time", "seed", "phases"}, "scenario");
  const double c1 = p.one_c_current();
  Scenario s;
  try {
    s.name = root["name"] ? root["name"].as<std::string>() : "custom";
    if (root["ambient_K"]) s.T_amb = root["ambient_K"].as<double>();
    if (root["dt"]) s.dt = root["dt"].as<double>();
    if (root["soc0"]) s.soc0 = root["soc0"].as<double>();
    if (root["max_time"]) s.max_time = root["max_time"].as<double>();
    if (root["seed"]) s.seed = root["seed"].as<std::uint64_t>();
    const YAML::Node phases = root["phases"];
    if (!phases || !phases.IsSequence()) throw bad("`phases` must be a list");
    for (const auto& n : phases) {
      if (!n.IsMap() || !n["type"]) throw bad("each phase needs a `type`");
      const auto type = n["type"].as<std::string>();
      Phase ph;
      if (n["duration"]) ph.duration = n["duration"].as<double>();
      if (type == "cc") {
        check_keys(n, {"type", "current", "c_rate", "duration"}, "cc phase");
        if (n["current"]) ph.current = n["current"].as<double>();
        else if (n["c_rate"]) ph.current = n["c_rate"].as<double>() * c1;
        else throw bad("cc phase needs `current` or `c_rate`");
      } else if (type == "cv") {
        check_keys(n, {"type", "voltage", "stop_current", "stop_c_rate", "duration"}, "cv phase");
        ph.kind = Phase::Kind::cv;
        if (!n["voltage"]) throw bad("cv phase needs `voltage`");
        ph.voltage = n["voltage"].as<double>();
        if (n["stop_current"]) ph.stop_current = n["stop_current"].as<double>();
        if (n["stop_c_rate"]) ph.stop_current = n["stop_c_rate"].as<double>() * c1;
      } else if (type == "rest") {
        check_keys(n, {"type", "duration"}, "rest phase");
        ph.kind = Phase::Kind::rest;
      } else if (type == "profile") {
        check_keys(n, {"type", "file", "samples", "builtin", "seed"}, "profile phase");
        ph.kind = Phase::Kind::profile;
        if (n["file"]) {
          std::filesystem::path f = n["file"].as<std::string>();
          if (f.is_relative() && !base_dir.empty()) f = base_dir / f;
          ph.samples = load_profile_csv(f);
        } else if (n["samples"]) {
          for (const auto& row : n["samples"]) {
            if (!row.IsSequence() || row.size() != 2) throw bad("samples rows are [t_s, I_A]");
            ph.samples.push_back({row[0].as<double>(), row[1].as<double>()});
          }
        } else if (n["builtin"]) {
          const auto b = n["builtin"].as<std::string>();
          if (b == "acc") {
            ph.samples = acc_profile(c1);
          } else if (b == "rc") {
            const std::uint64_t seed = n["seed"] ? n["seed"].as<std::uint64_t>() : kRcSeed;
            s.seed = seed;
            ph.samples = rc_profile(c1, seed);
          } else {
            throw bad("unknown built-in profile '" + b + "'");
          }
        } else {
          throw bad("profile phase needs `file`, `samples` or `builtin`");
        }
        ph.duration = ph.profile_end();
      } else {
        throw bad("unknown phase type '" + type + "'");
      }
      s.phases.push_back(std::move(ph));
    }
  } catch (const YAML::Exception& e) {
    throw bad(std::string("YAML: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& file, const CellParameters& p) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::io, "cannot open scenario " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), p, file.parent_path());
}

Scenario resolve_scenario(std::string_view name_or_path, const CellParameters& p) {
  const auto names = builtin_scenarios();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return builtin_scenario(name_or_path, p);
  }
  const std::filesystem::path direct{std::string(name_or_path)};
  if (std::filesystem::is_regular_file(direct)) return load_scenario(direct, p);
  const auto shipped = data_dir() / "scenarios" / (std::string(name_or_path) + ".yaml");
  if (std::filesystem::is_regular_file(shipped)) return load_scenario(shipped, p);
  throw Error(ErrorKind::io, "no scenario named '" + std::string(name_or_path) + "'");
}

}  // namespace lisim
