#include "lisim/electrolyte.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lisim/error.hpp"

namespace lisim {

InterfaceDiffusivity interface_diffusivity(const CellParameters& p,
                                           const InterfaceConcentrations& ce, double T) {
  const double d_left = electrolyte_diffusivity(p, ce.neg_sep, T);
  const double d_right = electrolyte_diffusivity(p, ce.sep_pos, T);
  return {bruggeman(p, d_left, p.neg.eps_e), bruggeman(p, d_left, p.sep.eps_e),
          bruggeman(p, d_right, p.sep.eps_e), bruggeman(p, d_right, p.pos.eps_e)};
}

InterfaceMatrix assemble_interface_matrix(const CellParameters& p, const InterfaceDiffusivity& de,
                                          InterfaceForm form) {
  if (!(de.neg_end > 0 && de.sep_start > 0 && de.sep_end > 0 && de.pos_start > 0)) {
    throw Error(ErrorKind::invalid_input, "interface diffusivities must be positive");
  }
  const double Ln = p.neg.thickness, Lp = p.pos.thickness, Ls = p.sep.thickness;
  double wn = 1.0, wp = 1.0;
  if (form == InterfaceForm::conservative) {
    wn = p.neg.area / p.sep.area;
    wp = p.pos.area / p.sep.area;
  }
  const double rn = wn * de.neg_end / de.sep_start;
  const double rp = wp * de.pos_start / de.sep_end;
  InterfaceMatrix out;
  out.form = form;
  if (form == InterfaceForm::conservative) {
    out.L[0] = {p.neg.area * de.neg_end * Ln, 0.0, p.pos.area * de.pos_start * Lp, 0.0};
  } else {
    out.L[0] = {rn * Ln, 0.0, rp * Lp, 0.0};
  }
  out.L[1] = {Ln * (Ln + rn * Ls), 1.0, -Lp * (Lp + rp * Ls), -1.0};
  out.L[2] = {Ln * Ln * Ln / 3.0, Ln, 0.0, 0.0};
  out.L[3] = {0.0, 0.0, Lp * Lp * Lp / 3.0, Lp};
  out.condition = equilibrated_condition(out.L);
  if (!(out.condition < kMaxInterfaceCondition)) {
    std::ostringstream os;
    os << "interface matrix condition number " << out.condition << " exceeds "
       << kMaxInterfaceCondition;
    throw Error(ErrorKind::singular, os.str());
  }
  out.inverse = inverse4(out.L);
  return out;
}

double ElectrolyteProfile::minimum() const noexcept {
  return std::min({neg(0.0), neg(L_neg), sep(0.0), sep(L_sep), pos(0.0), pos(L_pos)});
}

ElectrolyteProfile solve_profile(const CellParameters& p, const InterfaceMatrix& L,
                                 const ElectrolyteState& q) {
  const Vec4 rhs{0.0, 0.0, q.neg / (p.neg.area * p.neg.eps_e), q.pos / (p.pos.area * p.pos.eps_e)};
  Vec4 x{};
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += L.inverse[i][j] * rhs[j];
    x[i] = s;
  }
  ElectrolyteProfile prof;
  prof.L_neg = p.neg.thickness;
  prof.L_sep = p.sep.thickness;
  prof.L_pos = p.pos.thickness;
  prof.a_neg = x[0];
  prof.b_neg = x[1];
  prof.a_pos = x[2];
  prof.b_pos = x[3];
  prof.b_sep = prof.neg(prof.L_neg);
  prof.a_sep = (prof.pos(0.0) - prof.b_sep) / prof.L_sep;
  return prof;
}

void validate_profile(const ElectrolyteProfile& profile) {
  const double m = profile.minimum();
  if (!(m > 0.0)) {
    std::ostringstream os;
    os << "electrolyte profile reaches ce = " << m << " mol/m^3";
    throw Error(ErrorKind::profile, os.str());
  }
}

double flux_balance_residual(const CellParameters& /*p*/, const InterfaceMatrix& L,
                             const ElectrolyteProfile& profile) {
  const double t1 = L.L[0][0] * profile.a_neg;
  const double t2 = L.L[0][2] * profile.a_pos;
  const double scale = std::abs(t1) + std::abs(t2);
  return scale > 0.0 ? std::abs(t1 + t2) / scale : 0.0;
}

QeDynamics qe_dynamics(const CellParameters& p, const InterfaceMatrix& L,
                       const InterfaceDiffusivity& de, double current) {
  const double vn = p.neg.area * p.neg.eps_e;
  const double vp = p.pos.area * p.pos.eps_e;
  const double q0 = p.initial_electrolyte_total();
  const double src = (1.0 - p.t_plus) * current / p.faraday;
  const auto& inv = L.inverse;

  const double gn = 2.0 * p.neg.area * p.neg.thickness * de.neg_end;
  const double cn = gn * (inv[0][2] / vn - inv[0][3] / vp);
  const double dn = gn * inv[0][3] * q0 / vp + src;

  const double gp = 2.0 * p.pos.area * p.pos.thickness * de.pos_start;
  const double cp = gp * (inv[2][3] / vp - inv[2][2] / vn);
  const double dp = gp * inv[2][2] * q0 / vn - src;

  if (!(cn < 0.0) || !(cp < 0.0)) {
    throw Error(ErrorKind::degenerate, "electrolyte time constant is not positive");
  }
  QeDynamics d;
  d.tau_neg = -1.0 / cn;
  d.gain_neg = dn * d.tau_neg;
  d.tau_pos = -1.0 / cp;
  d.gain_pos = dp * d.tau_pos;
  return d;
}

ElectrolyteState step_qe(const ElectrolyteState& q, const QeDynamics& dyn, double dt) {
  if (!(dt > 0)) throw Error(ErrorKind::invalid_input, "step_qe: dt must be positive");
  const double en = -std::expm1(-dt / dyn.tau_neg);
  const double ep = -std::expm1(-dt / dyn.tau_pos);
  return {q.neg + (dyn.gain_neg - q.neg) * en, q.pos + (dyn.gain_pos - q.pos) * ep};
}

ElectrolyteState initial_electrolyte(const CellParameters& p) noexcept {
  return {p.neg.area * p.neg.thickness * p.neg.eps_e * p.ce0,
          p.pos.area * p.pos.thickness * p.pos.eps_e * p.ce0};
}

}  // namespace lisim
