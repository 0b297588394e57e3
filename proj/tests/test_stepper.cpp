#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "lisim/error.hpp"
#include "lisim/simulator.hpp"

using namespace lisim;
using lisim::test::cell;
using lisim::test::close_rel;

namespace {

Trajectory simulate(const std::string& chem, const Scenario& s, SimulatorConfig cfg = {}) {
  const auto& c = cell(chem);
  Simulator sim(c.p, c.ocp, c.w, cfg);
  return sim.run(s);
}

}  // namespace

TEST_CASE("zero current is a fixed point") {
  const auto& c = cell("ncm523");
  Engine eng(c.p, c.ocp, c.w);
  const CellState s0 = eng.initial_state(0.55, 298);
  CellState s = s0;
  for (int k = 0; k < 200; ++k) s = eng.step_current(s, 0.0, 298, 5.0).state;
  const auto a = s0.inertial(), b = s.inertial();
  for (int i = 0; i < kInertialStates; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10 * std::abs(a[i]) + 1e-9);
}

TEST_CASE("exact updates compose") {
  const auto& c = cell("ncm523");
  Engine eng(c.p, c.ocp, c.w);
  const CellState s = eng.initial_state(0.7, 298);
  const Snapshot snap = eng.evaluate(s, 2.0);
  const QeDynamics d = qe_dynamics(c.p, snap.matrix, snap.de, 2.0);
  const ElectrolyteState one = step_qe(step_qe(s.qe, d, 3.0), d, 4.0);
  const ElectrolyteState two = step_qe(s.qe, d, 7.0);
  CHECK(close_rel(one.neg, two.neg, 1e-13));
  CHECK(close_rel(one.pos, two.pos, 1e-13));

  const double w1 = step_offset(step_offset(-100.0, 2e-5, 1e-14, 5e-6, 1.0 / 28, 3.0), 2e-5, 1e-14,
                                5e-6, 1.0 / 28, 4.0);
  const double w2 = step_offset(-100.0, 2e-5, 1e-14, 5e-6, 1.0 / 28, 7.0);
  CHECK(close_rel(w1, w2, 1e-12));
}

TEST_CASE("constant current discharge stops at the lower cut-off") {
  for (const char* chem : {"ncm523", "ncm811", "lfpo"}) {
    const auto& c = cell(chem);
    const Trajectory t = simulate(chem, builtin_scenario("cc_1c", c.p));
    REQUIRE(!t.failed());
    CHECK(t.stop_reason == "v_min");
    CHECK(t.records.back().V <= c.p.operating.v_min);
    for (std::size_t k = 1; k < t.records.size(); ++k) {
      CHECK(t.records[k].t > t.records[k - 1].t);
      CHECK(t.records[k].soc < t.records[k - 1].soc);
    }
    // Coulomb counting
    const double dq = (t.soc0 - t.records.back().soc) * c.p.operating.capacity_mAh * 3.6;
    CHECK(close_rel(dq, c.p.one_c_current() * t.records.back().t, 0.01));
  }
}

TEST_CASE("CCCV charge tapers") {
  const auto& c = cell("ncm523");
  const Trajectory t = simulate("ncm523", builtin_scenario("cccv", c.p));
  REQUIRE(!t.failed());
  CHECK(t.stop_reason == "current_cutoff");
  std::size_t k0 = 0;
  while (k0 < t.records.size() && std::abs(t.records[k0].V - c.p.operating.v_max) > 1e-4) ++k0;
  REQUIRE(k0 + 10 < t.records.size());
  for (std::size_t k = k0 + 2; k < t.records.size(); ++k) {
    CHECK(std::abs(t.records[k].V - c.p.operating.v_max) < 1e-4);
    CHECK(-t.records[k].I < -t.records[k - 1].I);
  }
  CHECK(std::abs(t.records.back().I) < c.p.one_c_current() / 20.0);
}

TEST_CASE("voltage hold at the present voltage returns the present current") {
  const auto& c = cell("ncm523");
  Engine eng(c.p, c.ocp, c.w);
  CellState s = eng.initial_state(0.5, 298);
  const double I = 1.2;
  for (int k = 0; k < 50; ++k) s = eng.step_current(s, I, 298, 1.0).state;
  const double V = eng.step_current(s, I, 298, 1.0).record.V;
  CHECK(std::abs(eng.cv_hold_current(s, V, 298, 1.0, I) - I) < 1e-6);
  // from a cold start the 0.1 mV band allows a few mA
  CHECK(std::abs(eng.cv_hold_current(s, V, 298, 1.0, 0.0) - I) < 1e-2);
  const auto r = eng.step(s, StepInput::voltage(V, 298, 1.0));
  CHECK(std::abs(r.record.V - V) < 1e-4);
}

TEST_CASE("scenario files") {
  const CellParameters p = preset("ncm523");
  const Scenario s = parse_scenario(R"(
name: pulse
dt: 2
soc0: 0.8
phases:
  - {type: cc, c_rate: 1, duration: 60}
  - {type: rest, duration: 120}
  - {type: cv, voltage: 4.1, stop_c_rate: 0.1}
  - {type: profile, samples: [[0, 1.0], [10, -1.0], [20, 0.0]]}
)",
                                    p);
  CHECK(s.name == "pulse");
  CHECK(s.dt == 2);
  REQUIRE(s.phases.size() == 4);
  CHECK(close_rel(s.phases[0].current, p.one_c_current(), 1e-15));
  CHECK(s.phases[1].kind == Phase::Kind::rest);
  CHECK(close_rel(s.phases[2].stop_current, 0.1 * p.one_c_current(), 1e-15));
  CHECK(s.phases[3].duration == 20);
  CHECK(s.phases[3].profile_current(12) == -1.0);

  CHECK_THROWS_AS(parse_scenario("phases: [{type: cc, current: 1, bogus: 2}]", p), Error);
  CHECK_THROWS_AS(parse_scenario("phases: [{type: cc, current: 1}]\ncolour: red", p), Error);
  CHECK_THROWS_AS(parse_scenario("phases: [{type: warp}]", p), Error);
  CHECK_THROWS_AS(parse_scenario("phases: [{type: cc}]", p), Error);
  CHECK_THROWS_AS(parse_scenario("[1, 2", p), Error);
  CHECK_THROWS_AS(builtin_scenario("nope", p), Error);
  CHECK(builtin_scenarios().size() == 8);
}

TEST_CASE("built-in profiles") {
  const double c1 = 1.5;
  const auto acc = acc_profile(c1);
  double q = 0.0;
  for (std::size_t k = 0; k + 1 < acc.size(); ++k) {
    q += acc[k].I * (acc[k + 1].t - acc[k].t);
    CHECK(q >= 0.0);
    CHECK(std::abs(acc[k].I) <= 3.0 * c1 + 1e-12);
  }
  CHECK(acc.back().t == doctest::Approx(1000.0));
  CHECK(acc.front().I > 0);

  const auto a = rc_profile(c1, 42), b = rc_profile(c1, 42), d = rc_profile(c1, 43);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].t == b[k].t);
    CHECK(a[k].I == b[k].I);
  }
  bool differs = a.size() != d.size();
  for (std::size_t k = 0; !differs && k < a.size(); ++k) differs = a[k].I != d[k].I;
  CHECK(differs);
  CHECK(a.back().t == doctest::Approx(217.0));
}

TEST_CASE("trajectory CSV round trip") {
  const auto& c = cell("ncm811");
  const Trajectory t = simulate("ncm811", builtin_scenario("rc", c.p));
  REQUIRE(!t.failed());
  const auto dir = std::filesystem::temp_directory_path() / "lisim_test_stepper";
  std::filesystem::create_directories(dir);
  const auto file = dir / "rc.csv";
  write_trajectory_csv(file, t);
  const Trajectory r = read_trajectory_csv(file);
  CHECK(r.stop_reason == t.stop_reason);
  CHECK(r.seed == t.seed);
  REQUIRE(r.records.size() == t.records.size());
  for (std::size_t k = 0; k < t.records.size(); k += 17) {
    CHECK(close_rel(r.records[k].V, t.records[k].V, 1e-9));
    CHECK(close_rel(r.records[k].css[5], t.records[k].css[5], 1e-9));
    CHECK(r.records[k].flags == t.records[k].flags);
  }
  // identical inputs give identical bytes
  std::ostringstream a, b;
  write_trajectory_csv(a, t);
  write_trajectory_csv(b, simulate("ncm811", builtin_scenario("rc", c.p)));
  CHECK(a.str() == b.str());
  std::filesystem::remove_all(dir);
}

TEST_CASE("electrolyte lithium is conserved in every scenario") {
  for (const char* chem : {"ncm523", "lfpo"}) {
    const auto& c = cell(chem);
    const double q0 = c.p.initial_electrolyte_total();
    for (const auto& name : builtin_scenarios()) {
      const Trajectory t = simulate(chem, builtin_scenario(name, c.p));
      INFO(chem << " " << name);
      REQUIRE(!t.failed());
      double worst = 0.0;
      for (const auto& r : t.records) worst = std::max(worst, std::abs(r.qe_neg + r.qe_pos - q0) / q0);
      CHECK(worst < 1e-10);
    }
  }
}
