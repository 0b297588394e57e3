#include "lisim/params.hpp"

#include <cmath>
#include <sstream>

#include "lisim/error.hpp"

namespace lisim {

namespace {

double arrhenius(double Ea, double R, double T, double T_ref) {
  return std::exp(-Ea / R * (1.0 / T - 1.0 / T_ref));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::invalid_input, what);
}

void check_electrode(const ElectrodeParams& e, const char* side) {
  const std::string s(side);
  require(e.thickness > 0 && e.area > 0, s + ": thickness and area must be positive");
  require(e.sigma > 0, s + ": sigma must be positive");
  require(e.film_resistance >= 0, s + ": film resistance must be non-negative");
  require(e.particle_radius > 0 && e.specific_area > 0 && e.cs_max > 0,
          s + ": radius, specific area and cs_max must be positive");
  require(e.eps_e > 0 && e.eps_e < 1 && e.eps_s > 0 && e.eps_s < 1,
          s + ": volume fractions must lie in (0,1)");
  require(e.eps_e + e.eps_s <= 1.0 + 1e-12, s + ": eps_e + eps_s exceeds 1");
  require(e.ks > 0, s + ": ks must be positive");
  require(e.varying.kr_ref > 0, s + ": kr_ref must be positive");
  const double derived = 3.0 * e.eps_s / e.particle_radius;
  if (std::abs(derived - e.specific_area) > 0.01 * e.specific_area) {
    std::ostringstream os;
    os << s << ": specific area " << e.specific_area << " differs from 3 eps_s / Rs = " << derived
       << " by more than 1 %";
    throw Error(ErrorKind::invalid_input, os.str());
  }
  require(!e.ocp.empty(), s + ": ocp material missing");
}

}  // namespace

const char* to_string(Electrode e) noexcept {
  return e == Electrode::negative ? "neg" : "pos";
}

double CellParameters::initial_electrolyte_total() const noexcept {
  return (neg.eps_e * neg.area * neg.thickness + pos.eps_e * pos.area * pos.thickness) * ce0;
}

void CellParameters::validate() const {
  check_electrode(neg, "negative electrode");
  check_electrode(pos, "positive electrode");
  require(sep.thickness > 0 && sep.area > 0, "separator: thickness and area must be positive");
  require(sep.eps_e > 0 && sep.eps_e < 1, "separator: eps_e must lie in (0,1)");
  require(mass > 0 && surface_area > 0, "geometry: mass and surface area must be positive");
  require(t_plus > 0 && t_plus < 1, "transport: t_plus must lie in (0,1)");
  require(contact_resistance >= 0, "transport: contact resistance must be non-negative");
  require(ce0 > 0, "material: ce0 must be positive");
  require(heat_capacity > 0 && heat_transfer > 0, "thermal: Cp and hc must be positive");
  require(faraday > 0 && gas_constant > 0 && T_ref > 0, "constants must be positive");
  require(bruggeman > 0, "constants: bruggeman exponent must be positive");
  require(operating.v_max > operating.v_min, "operating: V_max must exceed V_min");
  require(operating.capacity_mAh > 0, "operating: capacity must be positive");
}

DiffusivityEval solid_diffusivity(const CellParameters& p, Electrode e, double cs_bulk, double T) {
  const ElectrodeParams& el = p.electrode(e);
  if (!(T > 0)) throw Error(ErrorKind::domain, "solid_diffusivity: T must be positive");
  const double y = cs_bulk / el.cs_max;
  const double k = el.varying.kDs_ref * arrhenius(el.varying.Ea_kDs, p.gas_constant, T, p.T_ref);
  const double b = el.varying.bDs_ref * arrhenius(el.varying.Ea_bDs, p.gas_constant, T, p.T_ref);
  const double ds = k * y + b;
  if (!(ds > kMinSolidDiffusivity)) return {kMinSolidDiffusivity, true};
  return {ds, false};
}

double electrolyte_diffusivity(const CellParameters& /*p*/, double ce, double T) {
  if (!(ce > 0)) throw Error(ErrorKind::domain, "electrolyte_diffusivity: ce must be positive");
  const double denom = T - 229.0 - 0.005 * ce;
  if (!(denom >= kDeGuard)) {
    std::ostringstream os;
    os << "electrolyte_diffusivity: T - 229 - 0.005 ce = " << denom << " K is below the "
       << kDeGuard << " K guard (T=" << T << ", ce=" << ce << ")";
    throw Error(ErrorKind::temperature_range, os.str());
  }
  return std::pow(10.0, -8.43 - 54.0 / denom - 2.2e-4 * ce);
}

double electrolyte_conductivity(const CellParameters& /*p*/, double ce, double T) {
  if (!(ce > 0) || !(T > 0)) {
    throw Error(ErrorKind::domain, "electrolyte_conductivity: ce and T must be positive");
  }
  const double c0 = 0.494e-6 * ce * ce + 0.668e-3 * ce - 10.5;
  const double c1 = -8.86e-10 * ce * ce - 1.78e-5 * ce + 0.074;
  const double c2 = 2.8e-8 * ce - 6.96e-5;
  const double inner = c0 + c1 * T + c2 * T * T;
  return ce / 1e4 * inner * inner;
}

double reaction_rate_coeff(const CellParameters& p, Electrode e, double T) {
  const VaryingParamCoeffs& v = p.electrode(e).varying;
  return arrhenius(v.Ea_kr, p.gas_constant, T, p.T_ref) * v.kr_ref;
}

double activity_term(const CellParameters& p, double ce) {
  const double c = ce / 1000.0;
  return p.activity.a * c * c + p.activity.b * c + p.activity.c;
}

double diffusion_potential_factor(const CellParameters& p, double ce, double T) {
  return 2.0 * thermal_voltage(p, T) * (p.t_plus - 1.0) * activity_term(p, ce);
}

double kappa_D(const CellParameters& p, double ce, double T, double kappa) {
  return kappa * diffusion_potential_factor(p, ce, T);
}

double kappa_D(const CellParameters& p, double ce, double T) {
  return kappa_D(p, ce, T, electrolyte_conductivity(p, ce, T));
}

double bruggeman(const CellParameters& p, double raw, double fraction) {
  return raw * std::pow(fraction, p.bruggeman);
}

double solid_conductivity_eff(const CellParameters& p, Electrode e) {
  const ElectrodeParams& el = p.electrode(e);
  return el.sigma * el.eps_s;
}

}  // namespace lisim
