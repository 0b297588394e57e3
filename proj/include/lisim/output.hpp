#pragma once

#include <array>
#include <span>

#include "lisim/electrolyte.hpp"
#include "lisim/params.hpp"
#include "lisim/reaction.hpp"

namespace lisim {

// Domains in x order.
enum class Domain { negative = 0, separator = 1, positive = 2 };

struct VoltageBreakdown {
  double phi_se_pos = 0.0;                // at the positive collector
  double phi_se_neg = 0.0;                // at the negative collector
  std::array<double, 3> polarization{};   // per domain
  std::array<double, 3> ohmic{};          // per domain
  double contact = 0.0;                   // Rc I
  double V = 0.0;

  double electrolyte_drop() const noexcept {
    return polarization[0] + polarization[1] + polarization[2] + ohmic[0] + ohmic[1] + ohmic[2];
  }
  // Sum of parts; equals V.
  double assembled() const noexcept {
    return phi_se_pos - phi_se_neg + electrolyte_drop() - contact;
  }
};

// Exact Butler-Volmer interface potential Phi_s - Phi_e.
double phi_se_boundary(const CellParameters& p, double jn, double i0, double ocp,
                       double film_resistance, double T) noexcept;
// Kinetic overpotential only.
double bv_overpotential(const CellParameters& p, double jn, double i0, double T) noexcept;

// -mean(kappa_D/kappa) * ln(ce_right / ce_left).
double polarization_drop(double factor_mean, double ce_left, double ce_right);

double ohmic_electrode_drop(const CellParameters& p, const ReactionSolution& r, double kappa_mean);
double ohmic_separator_drop(const CellParameters& p, double current, double kappa_mean) noexcept;

// Per-domain transport means used by the voltage model.
struct DomainTransport {
  std::array<double, 3> kappa{};   // effective conductivity
  std::array<double, 3> factor{};  // kappa_D / kappa, volts
};

// Interface kinetics at the two collectors.
struct BoundaryKinetics {
  double jn = 0.0;
  double i0 = 0.0;
  double ocp = 0.0;
};

VoltageBreakdown terminal_voltage(const CellParameters& p, const ReactionSolution& neg,
                                  const ReactionSolution& pos, const BoundaryKinetics& at_neg,
                                  const BoundaryKinetics& at_pos, const ElectrolyteProfile& profile,
                                  const DomainTransport& transport, double T, double current);

// -F sum_e A_e int as jn U dx - I V with the 4-point rule.
double heat_rate(const CellParameters& p, std::span<const double, 4> jn_neg,
                 std::span<const double, 4> ocp_neg, std::span<const double, 4> jn_pos,
                 std::span<const double, 4> ocp_pos, double current, double V);

struct ThermalStep {
  double T = 0.0;
  double tau = 0.0;
  double gain = 0.0;
};

ThermalStep step_temperature(const CellParameters& p, double T, double heat, double T_amb,
                             double dt);

}  // namespace lisim
