#pragma once

#include <string>

namespace lisim {

enum class Electrode { negative, positive };

inline constexpr int index_of(Electrode e) noexcept { return e == Electrode::negative ? 0 : 1; }
const char* to_string(Electrode e) noexcept;

// Arrhenius-scaled kinetic and solid-diffusion coefficients of one electrode.
struct VaryingParamCoeffs {
  double Ea_kDs = 0.0;   // J/mol
  double Ea_bDs = 0.0;   // J/mol
  double kDs_ref = 0.0;  // m^2/s
  double bDs_ref = 0.0;  // m^2/s
  double Ea_kr = 0.0;    // J/mol
  double kr_ref = 0.0;   // A m^2.5 / mol^1.5
};

struct ElectrodeParams {
  double thickness = 0.0;        // m
  double area = 0.0;             // m^2
  double sigma = 0.0;            // S/m, bulk solid conductivity
  double film_resistance = 0.0;  // Ohm m^2
  double particle_radius = 0.0;  // m
  double specific_area = 0.0;    // 1/m
  double cs_max = 0.0;           // mol/m^3
  double eps_e = 0.0;
  double eps_s = 0.0;
  double ks = 1.0 / 28.0;        // diffusion time-constant factor
  VaryingParamCoeffs varying;
  std::string ocp;  // material tag or table path
};

struct SeparatorParams {
  double thickness = 0.0;
  double area = 0.0;
  double eps_e = 0.0;
};

// Activity correction d ln f / d ln ce = a ce'^2 + b ce' + c with ce' = ce/1000.
struct ActivityFit {
  double a = 0.55;
  double b = 1.08;
  double c = -0.44;
};

struct OperatingLimits {
  double v_min = 0.0;         // V
  double v_max = 0.0;         // V
  double capacity_mAh = 0.0;  // rated capacity Qc
};

struct CellParameters {
  std::string name;
  ElectrodeParams neg;
  ElectrodeParams pos;
  SeparatorParams sep;

  double mass = 0.0;                // kg
  double surface_area = 0.0;        // m^2, cooling surface
  double t_plus = 0.0;
  double contact_resistance = 0.0;  // Ohm
  double ce0 = 0.0;                 // mol/m^3
  double heat_capacity = 0.0;       // J/kg/K
  double heat_transfer = 0.0;       // W/m^2/K

  double faraday = 96485.33;
  double gas_constant = 8.314;
  double bruggeman = 1.5;
  double alpha_a = 0.5;
  double alpha_c = 0.5;
  double T_ref = 298.0;
  ActivityFit activity;
  OperatingLimits operating;

  const ElectrodeParams& electrode(Electrode e) const noexcept {
    return e == Electrode::negative ? neg : pos;
  }
  ElectrodeParams& electrode(Electrode e) noexcept {
    return e == Electrode::negative ? neg : pos;
  }

  // Qe0: total solution-phase Li+ in both electrode domains at ce0.
  double initial_electrolyte_total() const noexcept;
  // Current of a 1C rate in A.
  double one_c_current() const noexcept { return operating.capacity_mAh / 1000.0; }
  double thermal_time_constant() const noexcept {
    return mass * heat_capacity / (heat_transfer * surface_area);
  }

  // Throws Error(invalid_input) on violated invariants.
  void validate() const;
};

inline double thermal_voltage(const CellParameters& p, double T) noexcept {
  return p.gas_constant * T / p.faraday;
}

struct DiffusivityEval {
  double value = 0.0;
  bool clamped = false;
};

inline constexpr double kMinSolidDiffusivity = 1e-18;
inline constexpr double kDeGuard = 5.0;

// Ds = kDs(T) y + bDs(T); clamped to kMinSolidDiffusivity when the law goes non-positive.
DiffusivityEval solid_diffusivity(const CellParameters& p, Electrode e, double cs_bulk, double T);
// Raw electrolyte diffusivity; throws temperature_range inside the correlation's pole.
double electrolyte_diffusivity(const CellParameters& p, double ce, double T);
// Raw electrolyte conductivity.
double electrolyte_conductivity(const CellParameters& p, double ce, double T);
double reaction_rate_coeff(const CellParameters& p, Electrode e, double T);
double activity_term(const CellParameters& p, double ce);
// kappa_D = 2 kappa (RT/F)(t+ - 1) * activity, from a supplied kappa.
double kappa_D(const CellParameters& p, double ce, double T, double kappa);
// kappa_D with the raw conductivity evaluated internally.
double kappa_D(const CellParameters& p, double ce, double T);
// kappa_D / kappa, volts per unit ln ce.
double diffusion_potential_factor(const CellParameters& p, double ce, double T);
// raw * fraction^p
double bruggeman(const CellParameters& p, double raw, double fraction);
// sigma * eps_s
double solid_conductivity_eff(const CellParameters& p, Electrode e);

}  // namespace lisim
