#pragma once

#include "lisim/params.hpp"
#include "lisim/small_linalg.hpp"

namespace lisim {

struct ElectrolyteState {
  double neg = 0.0;  // Qe-, mol
  double pos = 0.0;  // Qe+, mol
  double total() const noexcept { return neg + pos; }
};

// Lagged concentrations at the two electrode/separator interfaces.
struct InterfaceConcentrations {
  double neg_sep = 0.0;
  double sep_pos = 0.0;
};

// Effective diffusivities at x = L-, 0sep, Lsep, 0+.
struct InterfaceDiffusivity {
  double neg_end = 0.0;
  double sep_start = 0.0;
  double sep_end = 0.0;
  double pos_start = 0.0;
};

InterfaceDiffusivity interface_diffusivity(const CellParameters& p,
                                           const InterfaceConcentrations& ce, double T);

// as_printed: rows exactly as derived per unit area. conservative: row 1 balances the total
// molar flow A*De*dce/dx across the separator, which makes Qe- + Qe+ an exact invariant.
enum class InterfaceForm { conservative, as_printed };

struct InterfaceMatrix {
  Mat4 L{};
  Mat4 inverse{};
  double condition = 0.0;
  InterfaceForm form = InterfaceForm::conservative;
};

inline constexpr double kMaxInterfaceCondition = 1e12;

InterfaceMatrix assemble_interface_matrix(const CellParameters& p, const InterfaceDiffusivity& de,
                                          InterfaceForm form = InterfaceForm::conservative);

// ce(x) = a x^2 + b in the negative electrode (x from the collector),
// a_sep x + b_sep in the separator, a (x - L+)^2 + b in the positive electrode (x from the separator).
struct ElectrolyteProfile {
  double a_neg = 0.0, b_neg = 0.0;
  double a_sep = 0.0, b_sep = 0.0;
  double a_pos = 0.0, b_pos = 0.0;
  double L_neg = 0.0, L_sep = 0.0, L_pos = 0.0;

  double neg(double x) const noexcept { return a_neg * x * x + b_neg; }
  double sep(double x) const noexcept { return a_sep * x + b_sep; }
  double pos(double x) const noexcept { return a_pos * (x - L_pos) * (x - L_pos) + b_pos; }
  double minimum() const noexcept;
  InterfaceConcentrations interfaces() const noexcept { return {neg(L_neg), pos(0.0)}; }
};

ElectrolyteProfile solve_profile(const CellParameters& p, const InterfaceMatrix& L,
                                 const ElectrolyteState& q);
// Throws Error(profile) when ce <= 0 anywhere on the profile.
void validate_profile(const ElectrolyteProfile& profile);
// Relative residual of row 1 (flux balance) at the solved profile.
double flux_balance_residual(const CellParameters& p, const InterfaceMatrix& L,
                             const ElectrolyteProfile& profile);

// dQe/dt = (K - Qe)/tau for each domain.
struct QeDynamics {
  double tau_neg = 0.0, gain_neg = 0.0;
  double tau_pos = 0.0, gain_pos = 0.0;
};

QeDynamics qe_dynamics(const CellParameters& p, const InterfaceMatrix& L,
                       const InterfaceDiffusivity& de, double current);
ElectrolyteState step_qe(const ElectrolyteState& q, const QeDynamics& dyn, double dt);

ElectrolyteState initial_electrolyte(const CellParameters& p) noexcept;

}  // namespace lisim
