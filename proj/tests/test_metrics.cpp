#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "lisim/error.hpp"
#include "lisim/metrics.hpp"

using namespace lisim;

namespace {

Trajectory ramp(double t0, double dt, int n, double slope) {
  Trajectory t;
  for (int k = 0; k < n; ++k) {
    StepRecord r;
    r.t = t0 + k * dt;
    r.V = 4.0 - slope * r.t;
    r.I = 1.0;
    r.T = 298.0;
    r.soc = 1.0 - 1e-4 * r.t;
    r.ce.fill(1200.0 + r.t);
    r.css.fill(2e4 - r.t);
    r.cs_bulk.fill(2e4);
    r.jn.fill(1e-5);
    t.records.push_back(r);
  }
  return t;
}

}  // namespace

TEST_CASE("hand example") {
  const std::vector<double> y{0, 1, 2}, yh{0, 1, 3};
  CHECK(r2(y, yh) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mae(y, yh) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(rmse(y, yh) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("reference points") {
  const std::vector<double> y{3.1, 3.5, 3.2, 4.0, 3.9};
  CHECK(r2(y, y) == 1.0);
  CHECK(rmse(y, y) == 0.0);
  CHECK(mae(y, y) == 0.0);
  const std::vector<double> mean(y.size(), (3.1 + 3.5 + 3.2 + 4.0 + 3.9) / 5.0);
  CHECK(std::abs(r2(y, mean)) < 1e-12);
}

TEST_CASE("ordering and monotone degradation") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> y(40), yh(40);
    for (int k = 0; k < 40; ++k) {
      y[k] = n(rng);
      yh[k] = y[k] + 0.3 * n(rng);
    }
    CHECK(rmse(y, yh) >= mae(y, yh));
    CHECK(mae(y, yh) >= 0.0);
    CHECK(r2(y, yh) <= 1.0);
  }
  std::vector<double> y(50);
  for (int k = 0; k < 50; ++k) y[k] = std::sin(0.2 * k);
  double prev = 1.0;
  for (double shift : {0.01, 0.05, 0.1, 0.5, 1.0}) {
    std::vector<double> yh(y);
    for (double& v : yh) v += shift;
    const double r = r2(y, yh);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("bad inputs") {
  const std::vector<double> a{1, 2, 3}, b{1, 2}, one{1}, flat{2, 2, 2};
  CHECK_THROWS_AS(r2(a, b), Error);
  CHECK_THROWS_AS(rmse(one, one), Error);
  CHECK_THROWS_AS(mae(a, b), Error);
  CHECK_THROWS_AS(r2(flat, a), Error);
  CHECK_NOTHROW(rmse(flat, a));
}

TEST_CASE("trajectory comparison resamples onto the reference") {
  const Trajectory a = ramp(0.0, 10.0, 50, 1e-3);
  // finer, offset sampling of the same linear signals: resampling is exact
  const Trajectory b = ramp(-3.0, 0.7, 800, 1e-3);
  const auto rows = compare_trajectories(a, b);
  const MetricRow& v = find_metric(rows, "V");
  CHECK(v.rmse < 1e-12);
  CHECK(v.r2 == doctest::Approx(1.0));
  CHECK(find_metric(rows, "ce", "pos_x3").mae < 1e-9);
  CHECK(std::isnan(find_metric(rows, "T").r2));
  CHECK(std::isnan(find_metric(rows, "cs_bulk", "neg_x1").r2));
  CHECK_THROWS_AS(find_metric(rows, "ce"), Error);
  CHECK_THROWS_AS(find_metric(rows, "bogus"), Error);

  const Trajectory c = ramp(0.0, 10.0, 50, 2e-3);
  CHECK(find_metric(compare_trajectories(a, c), "V").rmse > 0.0);

  CompareOptions opt;
  opt.fields = {"x_ss"};
  CHECK_THROWS_AS(compare_trajectories(a, b, opt), Error);
  opt.cs_max = std::array<double, 2>{3.11e4, 5.1e4};
  const auto xs = compare_trajectories(a, b, opt);
  CHECK(xs.size() == 8);
  CHECK(find_metric(xs, "x_ss", "neg_x2").rmse < 1e-12);

  std::ostringstream out;
  write_metric_report(out, rows);
  CHECK(out.str().rfind("field,position,R2,RMSE,MAE\n", 0) == 0);
  CHECK(out.str().find("\nV,,") != std::string::npos);
}
