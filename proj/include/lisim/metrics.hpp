#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lisim/trajectory.hpp"

namespace lisim {

// y is the reference, y_hat the estimate. All throw invalid_input on length mismatch or
// fewer than two samples; r2 also throws on constant y.
double r2(std::span<const double> y, std::span<const double> y_hat);
double rmse(std::span<const double> y, std::span<const double> y_hat);
double mae(std::span<const double> y, std::span<const double> y_hat);

struct MetricRow {
  std::string field;
  std::string position;  // collocation label, or empty for scalar fields
  double r2 = 0.0;       // NaN when the reference is constant
  double rmse = 0.0;
  double mae = 0.0;
};

struct CompareOptions {
  // Scalar: V, I, T, SOC, Qh. Per-point: ce, css, cs_bulk, jn, and x_ss / x_bulk
  // (stoichiometries, which need cs_max).
  std::vector<std::string> fields{"V", "T", "SOC", "ce", "css", "cs_bulk", "jn"};
  std::optional<std::array<double, 2>> cs_max;  // neg, pos
};

// Resamples b linearly onto a's timestamps inside the common time range; a is the reference.
std::vector<MetricRow> compare_trajectories(const Trajectory& a, const Trajectory& b,
                                            const CompareOptions& opt = {});
const MetricRow& find_metric(const std::vector<MetricRow>& rows, const std::string& field,
                             const std::string& position = {});
void write_metric_report(std::ostream& out, const std::vector<MetricRow>& rows);

}  // namespace lisim
