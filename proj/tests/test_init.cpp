#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lisim/engine.hpp"
#include "lisim/error.hpp"
#include "lisim/init.hpp"

using namespace lisim;
using lisim::test::cell;
using lisim::test::close_rel;

TEST_CASE("window satisfies its defining equations") {
  for (const char* chem : {"ncm523", "ncm811", "lfpo"}) {
    const auto& c = cell(chem);
    const StoichiometryWindow& w = c.w;
    INFO(chem);
    CHECK(window_residuals(c.p, c.ocp, w).max_abs() < 1e-6);
    CHECK(std::abs(c.ocp.pos.potential(w.y0_pos) - c.ocp.neg.potential(w.y1_neg) - c.p.operating.v_max) < 1e-6);
    CHECK(std::abs(c.ocp.pos.potential(w.y1_pos) - c.ocp.neg.potential(w.y0_neg) - c.p.operating.v_min) < 1e-6);
    CHECK(close_rel(w.span_neg(), window_span(c.p, Electrode::negative, c.p.operating.capacity_mAh), 1e-12));
    for (double y : {w.y0_neg, w.y1_neg, w.y0_pos, w.y1_pos}) {
      CHECK(y > 0.0);
      CHECK(y < 1.0);
    }
  }
}

TEST_CASE("capacity feasibility") {
  const CellParameters p = preset("ncm523");
  CHECK(close_rel(window_span(p, Electrode::negative, 5000), 2.4363868, 1e-6));
  CHECK(close_rel(window_span(p, Electrode::negative, 1500), 0.73091603, 1e-6));
  const OcpPair ocp = load_ocp_pair(p);
  CHECK_THROWS_AS(solve_window(p, ocp, p.operating.v_min, p.operating.v_max, 5000), Error);
  CHECK_NOTHROW(solve_window(p, ocp, p.operating.v_min, p.operating.v_max, 1500));
}

TEST_CASE("narrower voltage bands give nested windows") {
  // same cell balance: the capacity of a sub-band follows from the SOC it spans
  const auto& c = cell("ncm523");
  const double lo = c.p.operating.v_min, hi = c.p.operating.v_max, Q = c.p.operating.capacity_mAh;
  StoichiometryWindow prev = c.w;
  for (double shrink : {0.05, 0.1, 0.2, 0.3}) {
    const double a = lo + shrink, b = hi - shrink;
    const double sa = soc_from_ocv(c.ocp, c.w, a), sb = soc_from_ocv(c.ocp, c.w, b);
    const StoichiometryWindow w = solve_window(c.p, c.ocp, a, b, Q * (sb - sa));
    CHECK(std::abs(w.y0_neg - c.w.y_neg(sa)) < 1e-6);
    CHECK(std::abs(w.y1_neg - c.w.y_neg(sb)) < 1e-6);
    CHECK(std::abs(w.y0_pos - c.w.y_pos(sb)) < 1e-6);
    CHECK(std::abs(w.y1_pos - c.w.y_pos(sa)) < 1e-6);
    CHECK(w.y0_neg > prev.y0_neg);
    CHECK(w.y1_neg < prev.y1_neg);
    CHECK(w.y0_pos > prev.y0_pos);
    CHECK(w.y1_pos < prev.y1_pos);
    prev = w;
  }
}

TEST_CASE("SOC-OCV curve") {
  for (const char* chem : {"ncm523", "ncm811", "lfpo"}) {
    const auto& c = cell(chem);
    const SocOcvTable t = soc_ocv_curve(c.w, c.ocp);
    INFO(chem);
    REQUIRE(t.soc.size() == 201);
    CHECK(std::abs(t.ocv.front() - c.p.operating.v_min) < 1e-6);
    CHECK(std::abs(t.ocv.back() - c.p.operating.v_max) < 1e-6);
    for (std::size_t k = 1; k < t.ocv.size(); ++k) CHECK(t.ocv[k] > t.ocv[k - 1]);
    const double mid = ocv_at_soc(c.ocp, c.w, 0.5);
    CHECK(mid > c.p.operating.v_min);
    CHECK(mid < c.p.operating.v_max);
    for (double s : {0.013, 0.25, 0.5, 0.77, 0.96}) {
      CHECK(std::abs(t.soc_at(ocv_at_soc(c.ocp, c.w, s)) - s) < 1e-4);
      CHECK(std::abs(soc_from_ocv(c.ocp, c.w, ocv_at_soc(c.ocp, c.w, s)) - s) < 1e-4);
    }
    CHECK_THROWS_AS(soc_from_ocv(c.ocp, c.w, c.p.operating.v_max + 0.05), Error);
    CHECK_THROWS_AS(soc_from_ocv(c.ocp, c.w, c.p.operating.v_min - 0.05), Error);
  }
}

TEST_CASE("initial state") {
  const auto& c = cell("ncm523");
  const CellState s = initialize_state(c.p, c.w, 1.0, 301);
  for (int i = 0; i < 4; ++i) {
    CHECK(close_rel(s.solid.neg.bulk[i], c.p.neg.cs_max * c.w.y1_neg, 1e-14));
    CHECK(close_rel(s.solid.pos.bulk[i], c.p.pos.cs_max * c.w.y0_pos, 1e-14));
    CHECK(s.solid.neg.offset[i] == 0.0);
    CHECK(s.solid.pos.offset[i] == 0.0);
  }
  CHECK(close_rel(s.qe.neg, 3.04859e-3, 1e-5));
  CHECK(s.T == 301);
  CHECK(s.dcs[0] == 0.0);
  CHECK(s.dcs[1] == 0.0);
  CHECK_THROWS_AS(initialize_state(c.p, c.w, 1.2, 298), Error);
  CHECK_THROWS_AS(initialize_state(c.p, c.w, 0.5, 0.0), Error);

  Engine eng(c.p, c.ocp, c.w);
  for (double soc : {0.0, 0.31, 0.9, 1.0}) CHECK(std::abs(eng.soc(eng.initial_state(soc, 298)) - soc) < 1e-9);
}
