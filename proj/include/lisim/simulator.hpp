#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "lisim/engine.hpp"
#include "lisim/scenario.hpp"
#include "lisim/stabilizer.hpp"
#include "lisim/trajectory.hpp"

namespace lisim {

struct Measurement {
  double t = 0.0;
  double V = 0.0;
  std::optional<double> T;
};

class MeasurementSeries {
 public:
  MeasurementSeries() = default;
  explicit MeasurementSeries(std::vector<Measurement> rows);

  // CSV with columns t_s, V_measured[, T_measured].
  static MeasurementSeries load_csv(const std::filesystem::path& file);
  static MeasurementSeries from_trajectory(const Trajectory& t);

  bool empty() const noexcept { return rows_.empty(); }
  // Linear interpolation; nullopt outside the covered time range.
  std::optional<Measurement> at(double t) const;

 private:
  std::vector<Measurement> rows_;
};

struct SimulatorConfig {
  EngineConfig engine;
  bool stabilize = true;
  SGFConfig sgf;
};

class Simulator {
 public:
  Simulator(CellParameters p, OcpPair ocp, SimulatorConfig cfg = {});
  Simulator(CellParameters p, OcpPair ocp, StoichiometryWindow w, SimulatorConfig cfg = {});

  const Engine& engine() const noexcept { return engine_; }
  const SimulatorConfig& config() const noexcept { return cfg_; }

  // Closed loop when measurements are supplied.
  Trajectory run(const Scenario& s, const MeasurementSeries* measurements = nullptr) const;
  Trajectory run_from(CellState state, const Scenario& s,
                      const MeasurementSeries* measurements = nullptr) const;

 private:
  Engine engine_;
  SimulatorConfig cfg_;
};

}  // namespace lisim
