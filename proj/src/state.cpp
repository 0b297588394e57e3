#include "lisim/state.hpp"

namespace lisim {

std::array<double, kInertialStates> CellState::inertial() const noexcept {
  std::array<double, kInertialStates> out{};
  out[0] = qe.neg;
  out[1] = qe.pos;
  for (int i = 0; i < 4; ++i) {
    out[2 + i] = solid.neg.bulk[i];
    out[6 + i] = solid.pos.bulk[i];
    out[10 + i] = solid.neg.offset[i];
    out[14 + i] = solid.pos.offset[i];
  }
  out[18] = T;
  return out;
}

double solid_lithium(const CellParameters& p, const SolidState& s) noexcept {
  const double vn = p.neg.area * p.neg.thickness * p.neg.eps_s;
  const double vp = p.pos.area * p.pos.thickness * p.pos.eps_s;
  return vn * electrode_average(s.neg.bulk) + vp * electrode_average(s.pos.bulk);
}

}  // namespace lisim
