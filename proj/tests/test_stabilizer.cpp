#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "lisim/error.hpp"
#include "lisim/init.hpp"
#include "lisim/stabilizer.hpp"

using namespace lisim;
using lisim::test::cell;

TEST_CASE("five-point quadratic weights") {
  const Eigen::MatrixXd B = sg_matrix(2, 5);
  const double w[5] = {-3, 12, 17, 12, -3};
  for (int j = 0; j < 5; ++j) CHECK(std::abs(B(2, j) - w[j] / 35.0) < 1e-12);
}

TEST_CASE("projection matrix properties") {
  for (auto [n, m] : {std::pair{2, 49}, std::pair{2, 7}, std::pair{3, 21}, std::pair{0, 5}}) {
    const Eigen::MatrixXd B = sg_matrix(n, m);
    CHECK((B * B - B).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((B - B.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < m; ++i) CHECK(std::abs(B.row(i).sum() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(sg_matrix(2, 48), Error);
  CHECK_THROWS_AS(sg_matrix(5, 5), Error);
}

TEST_CASE("low-degree polynomials pass through") {
  const Eigen::MatrixXd B = sg_matrix(2, 49);
  std::vector<double> seq(60);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const double t = static_cast<double>(k);
    seq[k] = 12000.0 - 3.1 * t + 0.02 * t * t;
  }
  const auto out = smooth_tail(seq, B);
  REQUIRE(out.size() == 49);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out[i] - seq[11 + i]) < 1e-9 * 12000.0);
  CHECK_THROWS_AS(smooth_tail(std::span<const double>(seq.data(), 10), B), Error);
}

TEST_CASE("alternating component is attenuated") {
  const Eigen::MatrixXd B = sg_matrix(2, 49);
  std::vector<double> ramp(49), noisy(49);
  for (int k = 0; k < 49; ++k) {
    ramp[k] = 15000.0 + 4.0 * k;
    noisy[k] = ramp[k] + (k % 2 ? 1.0 : -1.0) * 0.01 * 15000.0;
  }
  const auto out = smooth_tail(noisy, B);
  // alternating residual of the interior points
  double worst = 0.0;
  for (int k = 0; k < 49; ++k) worst = std::max(worst, std::abs(out[k] - ramp[k]));
  double interior = 0.0;
  for (int k = 10; k < 39; ++k) interior = std::max(interior, std::abs(out[k] - ramp[k]));
  CHECK(interior * 10.0 <= 0.01 * 15000.0);
  // the end row leans on one side and damps less
  CHECK(worst * 5.0 <= 0.01 * 15000.0);
  double nyquist = 0.0;
  for (int j = 0; j < 49; ++j) nyquist += (j % 2 ? -1.0 : 1.0) * B(24, j);
  CHECK(std::abs(nyquist) <= 0.1);

  const auto twice = smooth_tail(out, B);
  for (int k = 0; k < 49; ++k) CHECK(std::abs(twice[k] - out[k]) < 1e-9 * 15000.0);
}

TEST_CASE("oscillation detector") {
  const double cs_max = 3.11e4;
  const SGFConfig cfg;
  std::vector<double> ramp, square, sine;
  for (int k = 0; k < 30; ++k) {
    ramp.push_back(10000.0 + 5.0 * k);
    square.push_back(10000.0 + (k % 2 ? 1 : -1) * 0.005 * cs_max);
    sine.push_back(10000.0 + 0.01 * cs_max * std::sin(2 * std::numbers::pi * k / 40.0));
  }
  CHECK_FALSE(detect_oscillation(ramp, cs_max, cfg));
  CHECK(detect_oscillation(square, cs_max, cfg));
  CHECK_FALSE(detect_oscillation(sine, cs_max, cfg));
  CHECK_FALSE(detect_oscillation(std::span<const double>(square.data(), 5), cs_max, cfg));
  // a tiny alternation is below the amplitude floor
  std::vector<double> tiny;
  for (int k = 0; k < 30; ++k) tiny.push_back(10000.0 + (k % 2 ? 1 : -1) * 1e-5 * cs_max);
  CHECK_FALSE(detect_oscillation(tiny, cs_max, cfg));

  const OscillationStats st = oscillation_stats(square, 8);
  CHECK(st.comparisons == 8);
  CHECK(st.sign_changes == 8);
  CHECK(st.amplitude == doctest::Approx(0.005 * cs_max));
}

TEST_CASE("stabilizer writes back through the offsets") {
  const auto& c = cell("ncm523");
  CellState s = initialize_state(c.p, c.w, 0.5, 298);
  const auto bulk_neg = s.solid.neg.bulk, bulk_pos = s.solid.pos.bulk;
  Stabilizer st;
  bool changed = false;
  for (int k = 0; k < 60; ++k) {
    std::array<double, 8> css{};
    for (int i = 0; i < 4; ++i) {
      css[i] = s.solid.neg.bulk[i] + (k % 2 ? 1 : -1) * 0.005 * c.p.neg.cs_max;
      css[4 + i] = s.solid.pos.bulk[i];
    }
    changed = st.update(c.p, s, css) || changed;
  }
  CHECK(changed);
  CHECK(st.active());
  CHECK(s.solid.neg.bulk == bulk_neg);
  CHECK(s.solid.pos.bulk == bulk_pos);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(s.solid.neg.offset[i]) < 0.1 * 0.005 * c.p.neg.cs_max);
    CHECK(std::abs(s.solid.pos.offset[i]) < 1e-9);
  }
}
