#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "lisim/corrector.hpp"
#include "lisim/electrolyte.hpp"
#include "lisim/init.hpp"
#include "lisim/ocp.hpp"
#include "lisim/output.hpp"
#include "lisim/params.hpp"
#include "lisim/reaction.hpp"
#include "lisim/state.hpp"

namespace lisim {

inline constexpr double kMaxStep = 10.0;  // s

struct StepInput {
  enum class Mode { current, voltage };
  Mode mode = Mode::current;
  double value = 0.0;   // A (positive = discharge) or V
  double T_amb = 298.0;
  double dt = 1.0;

  static StepInput current(double I, double T_amb, double dt) {
    return {Mode::current, I, T_amb, dt};
  }
  static StepInput voltage(double V, double T_amb, double dt) {
    return {Mode::voltage, V, T_amb, dt};
  }
  void validate() const;
};

// Labels of the 8 collocation points in record order.
inline constexpr std::array<const char*, 8> kPointLabels{
    "neg_x1", "neg_x2", "neg_x3", "neg_x4", "pos_x1", "pos_x2", "pos_x3", "pos_x4"};

struct StepRecord {
  double t = 0.0;
  double I = 0.0;
  double V = 0.0;
  double T = 0.0;
  double soc = 0.0;
  std::array<double, 8> ce{};
  std::array<double, 8> css{};
  std::array<double, 8> cs_bulk{};
  std::array<double, 8> jn{};
  double qe_neg = 0.0;
  double qe_pos = 0.0;
  double heat = 0.0;
  std::uint32_t flags = 0;

  // Diagnostics not written to the CSV.
  VoltageBreakdown voltage;
  double ocv_surface = 0.0;          // U+(css at the positive collector) - U-(css at the negative)
  double jn_integral_error = 0.0;    // worst relative error of the analytic jn integral
  double correction_li_change = 0.0;
  std::array<double, 2> y_bulk{};    // electrode-average stoichiometry
};

struct EngineConfig {
  // Unset: uniform for an LFP positive electrode, analytic otherwise.
  std::array<std::optional<JnMode>, 2> jn_mode{};
  InterfaceForm interface_form = InterfaceForm::conservative;
  bool strict = false;
  // Quadrature check of the analytic jn integral on every record.
  bool audit_jn_integral = true;
  CorrectorConfig corrector;
};

// Everything computed from one state at one current.
struct Snapshot {
  InterfaceDiffusivity de;
  InterfaceMatrix matrix;
  ElectrolyteProfile profile;
  std::array<double, 8> ce{};
  std::array<double, 8> css{};
  std::array<double, 8> ocp{};
  std::array<double, 8> i0{};
  std::array<double, 8> ds{};
  std::array<double, 2> kr{};
  ReactionSolution neg;
  ReactionSolution pos;
  DomainTransport transport;
  BoundaryKinetics at_neg;
  BoundaryKinetics at_pos;
  VoltageBreakdown voltage;
  double heat = 0.0;
  double ocv_surface = 0.0;
  double T = 0.0;
  double current = 0.0;
  std::uint32_t flags = 0;

  std::array<double, 8> jn() const noexcept;
};

class Engine {
 public:
  Engine(CellParameters params, OcpPair ocp, StoichiometryWindow window, EngineConfig cfg = {});

  const CellParameters& params() const noexcept { return p_; }
  const OcpPair& ocp() const noexcept { return ocp_; }
  const StoichiometryWindow& window() const noexcept { return window_; }
  const EngineConfig& config() const noexcept { return cfg_; }
  JnMode jn_mode(Electrode e) const noexcept { return mode_[index_of(e)]; }

  CellState initial_state(double soc0, double T_amb) const;
  double soc(const CellState& s) const noexcept;

  Snapshot evaluate(const CellState& s, double current) const;
  StepRecord make_record(const CellState& s, const Snapshot& snap) const;

  struct Result {
    CellState state;
    StepRecord record;
  };
  // Voltage mode resolves the current with cv_hold_current first.
  Result step(const CellState& s, const StepInput& in) const;
  Result step_current(const CellState& s, double current, double T_amb, double dt) const;
  // Current whose step lands the terminal voltage on v_target within 0.1 mV.
  double cv_hold_current(const CellState& s, double v_target, double T_amb, double dt,
                         double guess) const;

 private:
  CellParameters p_;
  OcpPair ocp_;
  StoichiometryWindow window_;
  EngineConfig cfg_;
  std::array<JnMode, 2> mode_{};
};

}  // namespace lisim
