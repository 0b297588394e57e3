#include "lisim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>

#include "lisim/error.hpp"

namespace lisim {

namespace {

void check(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) throw Error(ErrorKind::invalid_input, "metric: length mismatch");
  if (y.size() < 2) throw Error(ErrorKind::invalid_input, "metric: need at least two samples");
}

double sse(std::span<const double> y, std::span<const double> y_hat) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
  return s;
}

using Getter = std::function<double(const StepRecord&)>;

struct Series {
  std::string field, position;
  Getter get;
};

std::vector<Series> expand(const std::string& field, const CompareOptions& opt) {
  std::vector<Series> out;
  auto scalar = [&](Getter g) { out.push_back({field, "", std::move(g)}); };
  auto points = [&](auto member, bool stoich) {
    if (stoich && !opt.cs_max) {
      throw Error(ErrorKind::invalid_input, "field " + field + " needs cs_max");
    }
    for (int i = 0; i < 8; ++i) {
      const double scale = stoich ? 1.0 / (*opt.cs_max)[i < 4 ? 0 : 1] : 1.0;
      out.push_back({field, kPointLabels[i],
                     [member, i, scale](const StepRecord& r) { return (r.*member)[i] * scale; }});
    }
  };
  if (field == "V") scalar([](const StepRecord& r) { return r.V; });
  else if (field == "I") scalar([](const StepRecord& r) { return r.I; });
  else if (field == "T") scalar([](const StepRecord& r) { return r.T; });
  else if (field == "SOC") scalar([](const StepRecord& r) { return r.soc; });
  else if (field == "Qh") scalar([](const StepRecord& r) { return r.heat; });
  else if (field == "ce") points(&StepRecord::ce, false);
  else if (field == "css") points(&StepRecord::css, false);
  else if (field == "cs_bulk") points(&StepRecord::cs_bulk, false);
  else if (field == "jn") points(&StepRecord::jn, false);
  else if (field == "x_ss") points(&StepRecord::css, true);
  else if (field == "x_bulk") points(&StepRecord::cs_bulk, true);
  else throw Error(ErrorKind::invalid_input, "unknown comparison field '" + field + "'");
  return out;
}

}  // namespace

double r2(std::span<const double> y, std::span<const double> y_hat) {
  check(y, y_hat);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double sst = 0.0;
  for (double v : y) sst += (v - mean) * (v - mean);
  if (!(sst > 0.0)) throw Error(ErrorKind::invalid_input, "r2: reference series is constant");
  return 1.0 - sse(y, y_hat) / sst;
}

double rmse(std::span<const double> y, std::span<const double> y_hat) {
  check(y, y_hat);
  return std::sqrt(sse(y, y_hat) / static_cast<double>(y.size()));
}

double mae(std::span<const double> y, std::span<const double> y_hat) {
  check(y, y_hat);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(y[i] - y_hat[i]);
  return s / static_cast<double>(y.size());
}

std::vector<MetricRow> compare_trajectories(const Trajectory& a, const Trajectory& b,
                                            const CompareOptions& opt) {
  const auto& ra = a.records;
  const auto& rb = b.records;
  if (ra.empty() || rb.empty()) throw Error(ErrorKind::invalid_input, "compare: empty trajectory");
  const double t0 = std::max(ra.front().t, rb.front().t);
  const double t1 = std::min(ra.back().t, rb.back().t);
  constexpr double eps = 1e-9;

  // (index into a, bracketing index into b, weight on b[j+1])
  struct Map { std::size_t i, j; double w; };
  std::vector<Map> map;
  std::size_t j = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double t = ra[i].t;
    if (t < t0 - eps || t > t1 + eps) continue;
    while (j + 1 < rb.size() && rb[j + 1].t < t - eps) ++j;
    if (j + 1 >= rb.size() || std::abs(rb[j].t - t) <= eps) {
      map.push_back({i, j, 0.0});
      continue;
    }
    const double dt = rb[j + 1].t - rb[j].t;
    map.push_back({i, j, dt > 0 ? (t - rb[j].t) / dt : 0.0});
  }
  if (map.size() < 2) throw Error(ErrorKind::invalid_input, "compare: trajectories do not overlap");

  std::vector<MetricRow> rows;
  std::vector<double> y(map.size()), yh(map.size());
  for (const auto& field : opt.fields) {
    for (const auto& s : expand(field, opt)) {
      for (std::size_t k = 0; k < map.size(); ++k) {
        const auto& m = map[k];
        y[k] = s.get(ra[m.i]);
        const double lo = s.get(rb[m.j]);
        yh[k] = m.w > 0 ? lo + m.w * (s.get(rb[m.j + 1]) - lo) : lo;
      }
      MetricRow row{s.field, s.position, std::numeric_limits<double>::quiet_NaN(), rmse(y, yh),
                    mae(y, yh)};
      const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
      if (*mx > *mn) row.r2 = r2(y, yh);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

const MetricRow& find_metric(const std::vector<MetricRow>& rows, const std::string& field,
                             const std::string& position) {
  for (const auto& r : rows) {
    if (r.field == field && r.position == position) return r;
  }
  throw Error(ErrorKind::invalid_input, "no metric row for " + field + " " + position);
}

void write_metric_report(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << "field,position,R2,RMSE,MAE\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.8g,%.8g,%.8g", r.r2, r.rmse, r.mae);
    out << r.field << ',' << r.position << ',' << buf << '\n';
  }
}

}  // namespace lisim
