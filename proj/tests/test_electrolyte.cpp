#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "lisim/electrolyte.hpp"
#include "lisim/error.hpp"

using namespace lisim;
using lisim::test::close_rel;

namespace {

InterfaceMatrix matrix_at(const CellParameters& p, double ce, InterfaceForm form) {
  return assemble_interface_matrix(p, interface_diffusivity(p, {ce, ce}, 298.0), form);
}

}  // namespace

TEST_CASE("initial electrolyte inventory") {
  const CellParameters p = preset("ncm523");
  const ElectrolyteState q = initial_electrolyte(p);
  CHECK(close_rel(q.neg, 3.0485934e-3, 1e-7));
  CHECK(close_rel(q.total(), p.initial_electrolyte_total(), 1e-14));
}

TEST_CASE("uniform state is a fixed point of the profile") {
  const CellParameters p = preset("ncm523");
  for (auto form : {InterfaceForm::conservative, InterfaceForm::as_printed}) {
    const auto L = matrix_at(p, p.ce0, form);
    const auto prof = solve_profile(p, L, initial_electrolyte(p));
    const double Ln = p.neg.thickness, Lp = p.pos.thickness;
    CHECK(std::abs(prof.a_neg * Ln * Ln) < 1e-10 * p.ce0);
    CHECK(std::abs(prof.a_pos * Lp * Lp) < 1e-10 * p.ce0);
    CHECK(std::abs(prof.a_sep * p.sep.thickness) < 1e-10 * p.ce0);
    CHECK(close_rel(prof.b_neg, p.ce0, 1e-10));
    CHECK(close_rel(prof.b_pos, p.ce0, 1e-10));
    CHECK(close_rel(prof.b_sep, p.ce0, 1e-10));
  }
}

TEST_CASE("profile satisfies every interface row") {
  const CellParameters p = preset("ncm811");
  const auto L = matrix_at(p, 1100, InterfaceForm::conservative);
  const ElectrolyteState q0 = initial_electrolyte(p);
  const ElectrolyteState q{q0.neg * 1.03, q0.pos * 0.97};
  const auto prof = solve_profile(p, L, q);
  const std::array<double, 4> x{prof.a_neg, prof.b_neg, prof.a_pos, prof.b_pos};
  const std::array<double, 4> rhs{0.0, 0.0, q.neg / (p.neg.area * p.neg.eps_e),
                                  q.pos / (p.pos.area * p.pos.eps_e)};
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += L.L[i][j] * x[j];
    const double scale = i < 2 ? std::abs(L.L[i][0] * x[0]) + std::abs(L.L[i][1] * x[1]) : rhs[i];
    CHECK(std::abs(s - rhs[i]) <= 1e-10 * scale);
  }
  // third row written out
  const double Ln = p.neg.thickness;
  CHECK(close_rel(Ln * Ln * Ln / 3 * prof.a_neg + Ln * prof.b_neg,
                  q.neg / (p.neg.area * p.neg.eps_e), 1e-12));
  // integrating the reconstructed parabolas returns the inventories
  CHECK(close_rel(p.neg.area * p.neg.eps_e * (prof.a_neg * Ln * Ln * Ln / 3 + prof.b_neg * Ln),
                  q.neg, 1e-10));
  const double Lp = p.pos.thickness;
  CHECK(close_rel(p.pos.area * p.pos.eps_e * (prof.a_pos * Lp * Lp * Lp / 3 + prof.b_pos * Lp),
                  q.pos, 1e-10));
  CHECK(flux_balance_residual(p, L, prof) < 1e-10);
}

TEST_CASE("symmetric cell gives a mirrored profile") {
  CellParameters p = preset("ncm523");
  p.pos.thickness = p.neg.thickness;
  p.pos.area = p.neg.area;
  p.sep.area = p.neg.area;
  p.pos.eps_e = p.neg.eps_e;
  const auto L = matrix_at(p, p.ce0, InterfaceForm::conservative);
  const ElectrolyteState q0 = initial_electrolyte(p);
  const double d = 0.02 * q0.neg;
  const auto prof = solve_profile(p, L, {q0.neg + d, q0.pos - d});
  CHECK(close_rel(prof.a_neg, -prof.a_pos, 1e-10));
  CHECK(close_rel(prof.neg(0.0) - p.ce0, p.ce0 - prof.pos(p.pos.thickness), 1e-9));
  CHECK(std::abs(prof.sep(0.5 * p.sep.thickness) - p.ce0) < 1e-9 * p.ce0);
}

TEST_CASE("discharge drives ce up on the negative side") {
  const CellParameters p = preset("ncm523");
  const auto de = interface_diffusivity(p, {p.ce0, p.ce0}, 298);
  const auto L = assemble_interface_matrix(p, de);
  ElectrolyteState q = initial_electrolyte(p);
  for (int k = 0; k < 30; ++k) q = step_qe(q, qe_dynamics(p, L, de, p.one_c_current()), 1.0);
  const auto prof = solve_profile(p, L, q);
  CHECK(prof.neg(0.0) > p.ce0);
  CHECK(prof.pos(p.pos.thickness) < p.ce0);
}

TEST_CASE("zero current keeps the uniform state") {
  const CellParameters p = preset("lfpo");
  const auto de = interface_diffusivity(p, {p.ce0, p.ce0}, 298);
  const auto L = assemble_interface_matrix(p, de);
  const ElectrolyteState q0 = initial_electrolyte(p);
  const ElectrolyteState q = step_qe(q0, qe_dynamics(p, L, de, 0.0), 1.0);
  CHECK(close_rel(q.neg, q0.neg, 1e-12));
  CHECK(close_rel(q.pos, q0.pos, 1e-12));
}

TEST_CASE("inventory is conserved under random currents") {
  const CellParameters p = preset("ncm523");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> cur(-3.0 * p.one_c_current(), 3.0 * p.one_c_current());
  ElectrolyteState q = initial_electrolyte(p);
  const double q0 = q.total();
  for (int k = 0; k < 1000; ++k) {
    const auto prof = solve_profile(p, assemble_interface_matrix(p, interface_diffusivity(p, {p.ce0, p.ce0}, 298)), q);
    const auto de = interface_diffusivity(p, prof.interfaces(), 298);
    const auto L = assemble_interface_matrix(p, de);
    q = step_qe(q, qe_dynamics(p, L, de, cur(rng)), 1.0);
  }
  CHECK(std::abs(q.total() - q0) / q0 < 1e-3);
  // the conservative matrix makes it exact up to rounding
  CHECK(std::abs(q.total() - q0) / q0 < 1e-10);
}

TEST_CASE("invalid inputs") {
  const CellParameters p = preset("ncm523");
  CHECK_THROWS_AS(assemble_interface_matrix(p, {0.0, 1e-10, 1e-10, 1e-10}), Error);
  ElectrolyteProfile prof;
  prof.b_neg = -1.0;
  CHECK_THROWS_AS(validate_profile(prof), Error);
  CHECK_THROWS_AS(step_qe({}, {1, 0, 1, 0}, 0.0), Error);
}
