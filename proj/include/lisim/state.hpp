#pragma once

#include <array>
#include <cstdint>

#include "lisim/electrolyte.hpp"
#include "lisim/solid.hpp"

namespace lisim {

inline constexpr int kInertialStates = 19;

struct CellState {
  ElectrolyteState qe;
  SolidState solid;
  double T = 298.0;

  // Correction states per electrode (neg, pos): the in-flight shift rate and the
  // target issued for the next step.
  std::array<double, 2> dcs{};
  std::array<double, 2> pending{};

  // Interface ce from the previous evaluation; feeds the De refresh.
  InterfaceConcentrations lag_ce;

  double t = 0.0;
  long step = 0;

  const ElectrodeSolid& electrode(Electrode e) const noexcept {
    return e == Electrode::negative ? solid.neg : solid.pos;
  }
  ElectrodeSolid& electrode(Electrode e) noexcept {
    return e == Electrode::negative ? solid.neg : solid.pos;
  }

  // Qe-, Qe+, bulk[8], offset[8], T.
  std::array<double, kInertialStates> inertial() const noexcept;
};

// Total intercalated lithium, mol, using the 4-point electrode average.
double solid_lithium(const CellParameters& p, const SolidState& s) noexcept;

}  // namespace lisim
