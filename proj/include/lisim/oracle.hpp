#pragma once

#include <vector>

#include "lisim/engine.hpp"
#include "lisim/init.hpp"
#include "lisim/ocp.hpp"
#include "lisim/params.hpp"
#include "lisim/scenario.hpp"
#include "lisim/trajectory.hpp"

namespace lisim {

struct P2DMesh {
  int n_neg = 51;
  int n_sep = 11;
  int n_pos = 51;
  int n_r = 18;

  void validate() const;
  P2DMesh scaled_x(int factor) const { return {n_neg * factor, n_sep * factor, n_pos * factor, n_r}; }
  P2DMesh scaled_r(int factor) const { return {n_neg, n_sep, n_pos, n_r * factor}; }
};

struct P2DConfig {
  P2DMesh mesh;
  double newton_tol = 1e-10;  // max residual relative to I/A (1C if I = 0)
  int max_newton = 50;
  int picard_passes = 2;
  int max_halvings = 4;
};

struct P2DState {
  std::vector<double> cs;      // particle shells, (n_neg + n_pos) x n_r
  std::vector<double> ce;      // n_neg + n_sep + n_pos cells
  std::vector<double> phi_se;  // warm start, n_neg + n_pos
  std::vector<double> jn;      // last pore-wall flux, n_neg + n_pos
  double T = 298.0;
  double t = 0.0;
  long step = 0;
};

class P2DSolver {
 public:
  P2DSolver(CellParameters p, OcpPair ocp, StoichiometryWindow w, P2DConfig cfg = {});

  const CellParameters& params() const noexcept { return p_; }
  const P2DConfig& config() const noexcept { return cfg_; }

  P2DState initial_state(double soc0, double T_amb) const;
  // One step with internal dt halving on Newton failure. Record fields are sampled at the
  // reduced model's collocation points; jn_integral_error holds the discrete charge balance.
  StepRecord step(P2DState& s, double current, double T_amb, double dt) const;
  double cv_hold_current(const P2DState& s, double v_target, double T_amb, double dt,
                         double guess) const;

  // Solid plus solution-phase lithium, mol.
  double total_lithium(const P2DState& s) const;
  double soc(const P2DState& s) const;

  Trajectory run(const Scenario& scenario) const;
  Trajectory run_from(P2DState state, const Scenario& scenario) const;

 private:
  struct Fields;
  void advance(P2DState& s, double current, double T_amb, double dt, Fields& f) const;
  StepRecord sample(const P2DState& s, const Fields& f, double current) const;

  CellParameters p_;
  OcpPair ocp_;
  StoichiometryWindow window_;
  P2DConfig cfg_;
  // Per x-cell geometry in collector-to-collector order.
  std::vector<double> dx_, area_, eps_;
};

}  // namespace lisim
