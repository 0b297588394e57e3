#pragma once

#include <vector>

#include "lisim/ocp.hpp"
#include "lisim/params.hpp"
#include "lisim/state.hpp"

namespace lisim {

struct StoichiometryWindow {
  double y0_neg = 0.0, y1_neg = 0.0;
  double y0_pos = 0.0, y1_pos = 0.0;
  double capacity_mAh = 0.0;
  double v_min = 0.0, v_max = 0.0;

  double span_neg() const noexcept { return y1_neg - y0_neg; }
  double span_pos() const noexcept { return y1_pos - y0_pos; }
  double y_neg(double soc) const noexcept { return y0_neg + soc * span_neg(); }
  double y_pos(double soc) const noexcept { return y1_pos - soc * span_pos(); }
};

// Stoichiometry swing delivering Qc: 3.6 Qc / (F A L cs_max eps_s).
double window_span(const CellParameters& p, Electrode e, double capacity_mAh) noexcept;

struct WindowResiduals {
  double v_max = 0.0;  // V
  double v_min = 0.0;  // V
  double cap_neg = 0.0;  // relative
  double cap_pos = 0.0;  // relative
  double max_abs() const noexcept;
};

StoichiometryWindow solve_window(const CellParameters& p, const OcpPair& ocp, double v_min,
                                 double v_max, double capacity_mAh);
StoichiometryWindow solve_window(const CellParameters& p, const OcpPair& ocp);
WindowResiduals window_residuals(const CellParameters& p, const OcpPair& ocp,
                                 const StoichiometryWindow& w);

// Equilibrium cell voltage at a SOC on the window.
double ocv_at_soc(const OcpPair& ocp, const StoichiometryWindow& w, double soc);

struct SocOcvTable {
  std::vector<double> soc;
  std::vector<double> ocv;
  double ocv_at(double s) const;
  double soc_at(double v) const;
};

SocOcvTable soc_ocv_curve(const StoichiometryWindow& w, const OcpPair& ocp, int n_points = 201);

// SOC whose equilibrium voltage equals v; throws Error(invalid_input) outside [V_min, V_max].
double soc_from_ocv(const OcpPair& ocp, const StoichiometryWindow& w, double v);

CellState initialize_state(const CellParameters& p, const StoichiometryWindow& w, double soc0,
                           double T_amb);

}  // namespace lisim
