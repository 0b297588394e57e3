#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "lisim/error.hpp"
#include "lisim/ocp.hpp"

using namespace lisim;

TEST_CASE("slope matches a centred finite difference") {
  for (const char* tag : {"graphite", "ncm523", "ncm811", "lfpo"}) {
    const OcpCurve c = load_ocp(tag);
    for (int i = 1; i < 400; ++i) {
      const double y = c.y_min() + (c.y_max() - c.y_min()) * (i + 0.37) / 400.0;
      if (y + 1e-6 > c.y_max()) break;
      const double h = 1e-7;
      const double fd = (c.potential(y + h) - c.potential(y - h)) / (2 * h);
      CHECK(std::abs(c.slope(y) - fd) <= 1e-6 * std::abs(fd) + 1e-6);
    }
  }
}

TEST_CASE("every material decreases with stoichiometry") {
  for (const char* tag : {"graphite", "ncm523", "ncm811", "lfpo"}) {
    const OcpCurve c = load_ocp(tag);
    CHECK(c.direction() == -1);
    for (double y = 0.01; y < 0.99; y += 0.01) CHECK(c.slope(y) <= 1e-9);
  }
}

TEST_CASE("inverse round-trips") {
  std::mt19937_64 rng(11);
  for (const char* tag : {"graphite", "ncm523"}) {
    const OcpCurve c = load_ocp(tag);
    std::uniform_real_distribution<double> d(c.y_min(), c.y_max());
    for (int i = 0; i < 100; ++i) {
      const double y = d(rng);
      const double u = c.potential(y);
      const double back = c.inverse(u, 0.0, 1.0);
      // on near-flat stretches the residual is the honest check
      CHECK(std::abs(c.potential(back) - u) < 1e-9);
      if (std::abs(c.slope(y)) > 0.05) CHECK(std::abs(back - y) < 1e-8);
    }
  }
}

TEST_CASE("inverse on the LFP plateau") {
  const OcpCurve c = load_ocp("lfpo");
  const double u = c.potential(0.5);
  const double y = c.inverse(u, 0.0, 1.0);
  CHECK(std::abs(c.potential(y) - u) < 1e-9);
  CHECK(y > 0.1);
  CHECK(y < 0.9);
}

TEST_CASE("out-of-range requests") {
  const OcpCurve c = load_ocp("graphite");
  CHECK_THROWS_AS(c.inverse(c.potential(0.0) + 0.5, 0.0, 1.0), Error);
  CHECK_THROWS_AS(c.potential(-0.01), Error);
  CHECK_THROWS_AS(c.potential(1.01), Error);
  bool ext = false;
  c.potential(0.5 * c.y_min(), &ext);
  CHECK(ext);
  c.potential(0.5, &ext);
  CHECK_FALSE(ext);
}

TEST_CASE("table validation") {
  CHECK_THROWS_AS(OcpCurve("x", {0.1, 0.2, 0.3}, {1, 2, 3}), Error);
  CHECK_THROWS_AS(OcpCurve("x", {0.1, 0.2, 0.3, 0.4}, {1, 2, 1.5, 3}), Error);
  CHECK_THROWS_AS(OcpCurve("x", {0.1, 0.3, 0.2, 0.4}, {4, 3, 2, 1}), Error);
  CHECK_THROWS_AS(load_ocp("no_such_material"), Error);
  // a flat segment is legal and has zero slope
  const OcpCurve flat("flat", {0.0, 0.3, 0.6, 1.0}, {4.0, 3.4, 3.4, 3.0});
  CHECK(std::abs(flat.slope(0.45)) < 1e-12);
}

TEST_CASE("interpolant passes through the knots") {
  const OcpCurve c = load_ocp("ncm811");
  const auto y = c.y_knots();
  const auto u = c.u_knots();
  for (std::size_t i = 0; i < y.size(); i += 7) CHECK(std::abs(c.potential(y[i]) - u[i]) < 1e-13);
}
