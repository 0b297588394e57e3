#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "helpers.hpp"
#include "lisim/output.hpp"
#include "lisim/error.hpp"

using namespace lisim;
using lisim::test::cell;
using lisim::test::close_rel;

namespace {

double quad(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

}  // namespace

TEST_CASE("interface potential") {
  const CellParameters p = preset("ncm523");
  CHECK(phi_se_boundary(p, 0.0, 10.0, 0.13, p.neg.film_resistance, 298) == 0.13);
  for (double j : {1e-6, 3e-5, 2e-4}) {
    CHECK(bv_overpotential(p, j, 7.0, 298) == doctest::Approx(-bv_overpotential(p, -j, 7.0, 298)).epsilon(1e-15));
  }
  CHECK(close_rel(bv_overpotential(p, 1.051e-5, 12.38, 298), 2.10274698e-3, 1e-7));
  // film term adds F Rf jn
  const double j = 2e-5;
  CHECK(close_rel(phi_se_boundary(p, j, 10, 0.0, 1e-3, 298) - phi_se_boundary(p, j, 10, 0.0, 0.0, 298),
                  p.faraday * 1e-3 * j, 1e-12));
}

TEST_CASE("concentration polarization") {
  CHECK(polarization_drop(-0.03, 1200, 1200) == 0.0);
  CHECK(polarization_drop(-0.03, 1300, 1100) == doctest::Approx(polarization_drop(-0.03, 2600, 2200)).epsilon(1e-15));
  // discharge: ce higher on the left, factor negative, so the term lowers V
  CHECK(polarization_drop(-0.03, 1300, 1100) < 0.0);
  CHECK_THROWS_AS(polarization_drop(-0.03, 0.0, 1100), Error);
}

TEST_CASE("separator ohmic drop") {
  const CellParameters p = preset("ncm523");
  CHECK(ohmic_separator_drop(p, 0.0, 0.3) == 0.0);
  const double kappa = 1.191 * std::pow(0.4, 1.5);
  CHECK(close_rel(ohmic_separator_drop(p, 1.0, kappa), -1.04368906e-3, 1e-7));
}

TEST_CASE("electrode ohmic drop matches quadrature of the electrolyte current") {
  const auto& c = cell("ncm523");
  const CellParameters& p = c.p;
  const double kappa = 0.35, I = 1.5;
  for (Electrode e : {Electrode::negative, Electrode::positive}) {
    const ElectrodeParams& el = p.electrode(e);
    const ReactionSolution u = jn_uniform(p, e, I);
    // electrolyte current density: rises across the negative electrode, falls across the positive
    auto ie = [&](double x) {
      return e == Electrode::negative ? I / el.area * x / el.thickness
                                      : I / el.area * (1.0 - x / el.thickness);
    };
    const double q = -quad([&](double x) { return ie(x) / kappa; }, 0.0, el.thickness);
    CHECK(close_rel(ohmic_electrode_drop(p, u, kappa), q, 1e-9));
  }
  // analytic mode against ie = as F J
  Engine eng(c.p, c.ocp, c.w);
  CellState s = eng.initial_state(0.8, 298);
  for (int k = 0; k < 60; ++k) s = eng.step_current(s, 3.0, 298, 1.0).state;
  const Snapshot snap = eng.evaluate(s, 3.0);
  for (const ReactionSolution* r : {&snap.neg, &snap.pos}) {
    const ElectrodeParams& el = p.electrode(r->side);
    const double kap = snap.transport.kappa[r->side == Electrode::negative ? 0 : 2];
    const double ie_int = quad([&](double x) { return el.specific_area * p.faraday * r->J(x); }, 0.0, r->length);
    const double expect = r->side == Electrode::negative ? -ie_int / kap : ie_int / kap;
    CHECK(close_rel(ohmic_electrode_drop(p, *r, kap), expect, 1e-9));
  }
}

TEST_CASE("terminal voltage") {
  const auto& c = cell("ncm523");
  Engine eng(c.p, c.ocp, c.w);
  const CellState s0 = eng.initial_state(0.6, 298);
  const Snapshot rest = eng.evaluate(s0, 0.0);
  CHECK(std::abs(rest.voltage.V - ocv_at_soc(c.ocp, c.w, 0.6)) < 1e-9);
  CHECK(std::abs(rest.voltage.assembled() - rest.voltage.V) < 1e-15);
  const Snapshot dis = eng.evaluate(s0, c.p.one_c_current());
  CHECK(dis.voltage.V < rest.voltage.V);
  const Snapshot chg = eng.evaluate(s0, -c.p.one_c_current());
  CHECK(chg.voltage.V > rest.voltage.V);
}

TEST_CASE("heat generation") {
  const auto& c = cell("ncm523");
  const std::array<double, 4> zero{}, u{0.1, 0.1, 0.1, 0.1};
  CHECK(heat_rate(c.p, zero, u, zero, u, 0.0, 3.8) == 0.0);

  Engine eng(c.p, c.ocp, c.w);
  CellState s = eng.initial_state(1.0, 298);
  const double I = c.p.one_c_current();
  double q = 0.0, bulk = 0.0;
  const double F = c.p.faraday;
  for (int k = 0; k < 5000; ++k) {
    const auto r = eng.step_current(s, I, 298, 1.0);
    s = r.state;
    CHECK(r.record.heat > 0.0);
    double sn = 0.0, sp = 0.0;
    for (int i = 0; i < 4; ++i) {
      sn += kAverageWeights[i] * r.record.jn[i] * c.ocp.neg.potential(r.record.css[i] / c.p.neg.cs_max);
      sp += kAverageWeights[i] * r.record.jn[4 + i] *
            c.ocp.pos.potential(r.record.css[4 + i] / c.p.pos.cs_max);
    }
    const double expect = -F * (c.p.neg.area * c.p.neg.specific_area * c.p.neg.thickness * sn +
                                c.p.pos.area * c.p.pos.specific_area * c.p.pos.thickness * sp) -
                          I * r.record.V;
    CHECK(close_rel(r.record.heat, expect, 1e-9));
    q += r.record.heat;
    bulk += I * (ocv_at_soc(c.ocp, c.w, std::clamp(r.record.soc, 0.0, 1.0)) - r.record.V);
    if (r.record.V <= c.p.operating.v_min) break;
  }
  // surface potentials leave out the solid diffusion loss
  CHECK(q > 0.0);
  CHECK(q < bulk);
}

TEST_CASE("lumped thermal model") {
  const CellParameters p = preset("ncm811");
  const ThermalStep t = step_temperature(p, 298, 0.0, 298, 1.0);
  CHECK(t.T == 298);
  CHECK(close_rel(t.tau, 437.5, 1e-12));
  double T = 298;
  for (int k = 0; k < 20000; ++k) T = step_temperature(p, T, 0.088, 298, 1.0).T;
  CHECK(std::abs(T - 299.0) < 1e-9);
}
