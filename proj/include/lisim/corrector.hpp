#pragma once

#include <array>
#include <cstdint>

#include "lisim/ocp.hpp"
#include "lisim/output.hpp"
#include "lisim/params.hpp"
#include "lisim/state.hpp"

namespace lisim {

struct CorrectorConfig {
  double threshold = 0.02;                 // V
  std::array<double, 2> tau{10.0, 10.0};   // s, (neg, pos)
  double max_dy_pos = 0.2;
  bool override_temperature = true;
  void validate() const;
};

// Equilibrium voltage implied by a measured terminal voltage and the model's drops.
double back_out_ocv(const CellParameters& p, double v_measured, const VoltageBreakdown& b,
                    const BoundaryKinetics& at_neg, const BoundaryKinetics& at_pos, double T,
                    double current);

// Interface terms at both collectors: film plus kinetic, positive minus negative.
double interface_overpotential(const CellParameters& p, const BoundaryKinetics& at_neg,
                               const BoundaryKinetics& at_pos, double T);

// A+ L+ eps_s+ cs_max+ / (A- L- eps_s- cs_max-): dy- = -ratio * dy+.
double correction_ratio(const CellParameters& p) noexcept;

struct Correction {
  double dy_neg = 0.0;
  double dy_pos = 0.0;
  // No root within the bound; the bound in the root's direction was returned.
  bool limited = false;
};

// Stoichiometry shifts on the mass-balance line that move the surface OCV
// U+(y_pos + dy+) - U-(y_neg + dy-) onto ocv_target.
Correction solve_correction(const CellParameters& p, const OcpPair& ocp, double ocv_target,
                            double y_neg, double y_pos, double max_dy_pos = 0.2);

// Fraction of an issued shift still to be applied by the in-flight correction state.
double pending_tail(double dcs, double tau, double dt) noexcept;

// Schedules Δcs = cs_max * dy for the next step, net of what is already in flight.
void issue_correction(const CellParameters& p, const CorrectorConfig& cfg, CellState& s,
                      const Correction& c, double dt);

struct CorrectionStep {
  std::array<double, 2> shift{};
  double scale = 1.0;            // < 1 when the shift was cut back to stay inside (0, cs_max)
  double lithium_change = 0.0;   // relative change of total solid lithium
};

// One step of the inertial correction: dcs <- e dcs + (1 - e) pending, then
// bulk += dcs on all four points of each electrode.
CorrectionStep advance_correction(const CellParameters& p, const CorrectorConfig& cfg,
                                  CellState& s, double dt);

}  // namespace lisim
