#include "lisim/output.hpp"

#include <cmath>

#include "lisim/error.hpp"
#include "lisim/solid.hpp"

namespace lisim {

double bv_overpotential(const CellParameters& p, double jn, double i0, double T) noexcept {
  return 2.0 * thermal_voltage(p, T) * std::asinh(p.faraday * jn / (2.0 * i0));
}

double phi_se_boundary(const CellParameters& p, double jn, double i0, double ocp,
                       double film_resistance, double T) noexcept {
  return ocp + p.faraday * film_resistance * jn + bv_overpotential(p, jn, i0, T);
}

double polarization_drop(double factor_mean, double ce_left, double ce_right) {
  if (!(ce_left > 0) || !(ce_right > 0)) {
    throw Error(ErrorKind::domain, "polarization_drop: boundary concentrations must be positive");
  }
  return -factor_mean * std::log(ce_right / ce_left);
}

double ohmic_electrode_drop(const CellParameters& p, const ReactionSolution& r, double kappa_mean) {
  const ElectrodeParams& el = p.electrode(r.side);
  if (r.mode == JnMode::uniform) return -r.current * el.thickness / (2.0 * kappa_mean * el.area);
  const double scale = el.specific_area * p.faraday / kappa_mean;
  return r.side == Electrode::negative ? -scale * r.integral_J() : scale * r.integral_J();
}

double ohmic_separator_drop(const CellParameters& p, double current, double kappa_mean) noexcept {
  return -p.sep.thickness * current / (kappa_mean * p.sep.area);
}

VoltageBreakdown terminal_voltage(const CellParameters& p, const ReactionSolution& neg,
                                  const ReactionSolution& pos, const BoundaryKinetics& at_neg,
                                  const BoundaryKinetics& at_pos, const ElectrolyteProfile& profile,
                                  const DomainTransport& transport, double T, double current) {
  VoltageBreakdown b;
  b.phi_se_neg = phi_se_boundary(p, at_neg.jn, at_neg.i0, at_neg.ocp, p.neg.film_resistance, T);
  b.phi_se_pos = phi_se_boundary(p, at_pos.jn, at_pos.i0, at_pos.ocp, p.pos.film_resistance, T);
  b.polarization[0] = polarization_drop(transport.factor[0], profile.neg(0.0), profile.neg(profile.L_neg));
  b.polarization[1] = polarization_drop(transport.factor[1], profile.sep(0.0), profile.sep(profile.L_sep));
  b.polarization[2] = polarization_drop(transport.factor[2], profile.pos(0.0), profile.pos(profile.L_pos));
  b.ohmic[0] = ohmic_electrode_drop(p, neg, transport.kappa[0]);
  b.ohmic[1] = ohmic_separator_drop(p, current, transport.kappa[1]);
  b.ohmic[2] = ohmic_electrode_drop(p, pos, transport.kappa[2]);
  b.contact = p.contact_resistance * current;
  b.V = b.assembled();
  return b;
}

double heat_rate(const CellParameters& p, std::span<const double, 4> jn_neg,
                 std::span<const double, 4> ocp_neg, std::span<const double, 4> jn_pos,
                 std::span<const double, 4> ocp_pos, double current, double V) {
  double sn = 0.0, sp = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    sn += kAverageWeights[i] * jn_neg[i] * ocp_neg[i];
    sp += kAverageWeights[i] * jn_pos[i] * ocp_pos[i];
  }
  const double in = p.neg.area * p.neg.specific_area * p.neg.thickness * sn;
  const double ip = p.pos.area * p.pos.specific_area * p.pos.thickness * sp;
  return -p.faraday * (in + ip) - current * V;
}

ThermalStep step_temperature(const CellParameters& p, double T, double heat, double T_amb,
                             double dt) {
  if (!(dt > 0)) throw Error(ErrorKind::invalid_input, "step_temperature: dt must be positive");
  ThermalStep s;
  s.tau = p.thermal_time_constant();
  s.gain = heat / (p.heat_transfer * p.surface_area) + T_amb;
  s.T = T + (s.gain - T) * (-std::expm1(-dt / s.tau));
  return s;
}

}  // namespace lisim
