#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "lisim/params.hpp"

namespace lisim {

struct ProfileSample {
  double t = 0.0;  // s, start of the segment
  double I = 0.0;  // A
};

struct Phase {
  enum class Kind { cc, cv, rest, profile };
  Kind kind = Kind::cc;
  double current = 0.0;   // cc: A, positive = discharge
  double voltage = 0.0;   // cv: V
  double duration = std::numeric_limits<double>::infinity();  // s
  double stop_current = 0.0;   // cv: |I| below this ends the phase
  std::vector<ProfileSample> samples;  // profile: piecewise-constant current

  double profile_current(double t) const noexcept;
  double profile_end() const noexcept;
};

const char* to_string(Phase::Kind k) noexcept;

struct Scenario {
  std::string name;
  std::vector<Phase> phases;
  double T_amb = 298.0;
  double dt = 1.0;
  double soc0 = 1.0;
  double max_time = 2.0e5;  // s, guard against runaway phases
  std::uint64_t seed = 0;   // recorded for generated profiles

  void validate() const;
};

// Names of the eight built-in operating scenarios.
std::vector<std::string> builtin_scenarios();
// Currents scale with the preset capacity; SOC0 depends on the chemistry for `acc`.
Scenario builtin_scenario(std::string_view name, const CellParameters& p);

// Alternating charge/discharge blocks up to 3C, discharge first, 1000 s.
std::vector<ProfileSample> acc_profile(double one_c);
// Random piecewise-constant current, 217 s, drawn from a seeded mt19937_64.
std::vector<ProfileSample> rc_profile(double one_c, std::uint64_t seed);

// CSV with columns t_s, I_A (header required).
std::vector<ProfileSample> load_profile_csv(const std::filesystem::path& file);

// YAML scenario. Currents may be given in A (`current`) or C-rate (`c_rate`).
Scenario parse_scenario(const std::string& yaml_text, const CellParameters& p,
                        const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& file, const CellParameters& p);
// Built-in name or path.
Scenario resolve_scenario(std::string_view name_or_path, const CellParameters& p);

}  // namespace lisim
