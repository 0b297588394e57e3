#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lisim/engine.hpp"
#include "lisim/scenario.hpp"

namespace lisim {

struct Trajectory {
  std::string model;      // "reduced" or "p2d"
  std::string scenario;
  std::string params;
  std::uint64_t seed = 0;
  double soc0 = 0.0;
  std::string stop_reason;  // completed, v_min, v_max, current_cutoff, max_time, error
  std::string error;        // message when stop_reason == "error"
  std::vector<StepRecord> records;

  bool failed() const noexcept { return stop_reason == "error"; }
};

// Fixed column order of the trajectory CSV.
std::vector<std::string> trajectory_columns();
void write_trajectory_csv(std::ostream& out, const Trajectory& t);
void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& t);
Trajectory read_trajectory_csv(const std::filesystem::path& file);

// Advances one step of whatever model is being driven; `guess` seeds CV solves.
using StepFunction = std::function<StepRecord(const StepInput& in, double guess)>;

// Walks the scenario phases, applying cut-offs. Model errors end the run with
// stop_reason "error" instead of propagating.
void drive_scenario(const Scenario& s, const CellParameters& p, const StepFunction& step,
                    Trajectory& out);

}  // namespace lisim
