#include "lisim/ocp.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lisim/error.hpp"
#include "lisim/param_file.hpp"

namespace lisim {

namespace {

// Monotone knot derivatives, same recipe as the classic PCHIP routine.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (f[k + 1] - f[k]) / h[k];
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto end_slope = [](double h0, double h1, double m0, double m1) {
    double s = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (s * m0 <= 0.0) return 0.0;
    if (m0 * m1 < 0.0 && std::abs(s) > 3.0 * std::abs(m0)) return 3.0 * m0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

}  // namespace

OcpCurve::OcpCurve(std::string material, std::vector<double> y, std::vector<double> u)
    : material_(std::move(material)), y_(std::move(y)), u_(std::move(u)) {
  if (y_.size() != u_.size() || y_.size() < 4) {
    throw Error(ErrorKind::invalid_input, "OCP table '" + material_ + "' needs >= 4 (y,U) pairs");
  }
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (!(y_[i] >= 0.0 && y_[i] <= 1.0) || !std::isfinite(u_[i])) {
      throw Error(ErrorKind::invalid_input, "OCP table '" + material_ + "' has invalid sample");
    }
    if (i > 0 && !(y_[i] > y_[i - 1])) {
      throw Error(ErrorKind::invalid_input,
                  "OCP table '" + material_ + "': y must be strictly increasing");
    }
  }
  direction_ = u_.back() < u_.front() ? -1 : 1;
  for (std::size_t i = 1; i < u_.size(); ++i) {
    if ((u_[i] - u_[i - 1]) * direction_ < -1e-9) {
      throw Error(ErrorKind::invalid_input, "OCP table '" + material_ + "' is not monotone");
    }
  }
  d_ = pchip_slopes(y_, u_);
}

OcpCurve OcpCurve::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::io, "cannot open OCP table " + file.string());
  std::string material = file.stem().string();
  std::vector<double> y, u;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const auto pos = line.find("material=");
      if (pos != std::string::npos) {
        material = line.substr(pos + 9);
        material.erase(material.find_last_not_of(" \t\r") + 1);
      }
      continue;
    }
    std::istringstream ls(line);
    double a = 0, b = 0;
    if (!(ls >> a >> b)) throw Error(ErrorKind::io, "malformed OCP line in " + file.string());
    y.push_back(a);
    u.push_back(b);
  }
  return OcpCurve(material, std::move(y), std::move(u));
}

std::size_t OcpCurve::segment(double y) const {
  auto it = std::upper_bound(y_.begin(), y_.end(), y);
  std::size_t k = static_cast<std::size_t>(it - y_.begin());
  if (k == 0) return 0;
  return std::min(k - 1, y_.size() - 2);
}

double OcpCurve::potential(double y, bool* extrapolated) const {
  if (!(y >= 0.0 && y <= 1.0)) {
    std::ostringstream os;
    os << "OCP '" << material_ << "': stoichiometry " << y << " outside [0,1]";
    throw Error(ErrorKind::domain, os.str());
  }
  if (extrapolated) *extrapolated = false;
  if (y < y_.front()) {
    if (extrapolated) *extrapolated = true;
    return u_.front() + d_.front() * (y - y_.front());
  }
  if (y > y_.back()) {
    if (extrapolated) *extrapolated = true;
    return u_.back() + d_.back() * (y - y_.back());
  }
  const std::size_t k = segment(y);
  const double h = y_[k + 1] - y_[k];
  const double t = (y - y_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * u_[k] + h10 * h * d_[k] + h01 * u_[k + 1] + h11 * h * d_[k + 1];
}

double OcpCurve::slope(double y) const {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw Error(ErrorKind::domain, "OCP '" + material_ + "': stoichiometry outside [0,1]");
  }
  if (y < y_.front()) return d_.front();
  if (y > y_.back()) return d_.back();
  const std::size_t k = segment(y);
  const double h = y_[k + 1] - y_[k];
  const double t = (y - y_[k]) / h;
  const double t2 = t * t;
  const double dh00 = 6 * t2 - 6 * t, dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = -6 * t2 + 6 * t, dh11 = 3 * t2 - 2 * t;
  return (dh00 * u_[k] + dh01 * u_[k + 1]) / h + dh10 * d_[k] + dh11 * d_[k + 1];
}

double OcpCurve::inverse(double u, double y_lo, double y_hi) const {
  y_lo = std::max(y_lo, 0.0);
  y_hi = std::min(y_hi, 1.0);
  auto f = [&](double y) { return potential(y) - u; };
  double f_lo = f(y_lo), f_hi = f(y_hi);
  if (std::abs(f_lo) < 1e-12) return y_lo;
  if (std::abs(f_hi) < 1e-12) return y_hi;
  if (f_lo * f_hi > 0.0) {
    std::ostringstream os;
    os << "OCP '" << material_ << "': potential " << u << " V not bracketed by [" << y_lo << ", "
       << y_hi << "]";
    throw Error(ErrorKind::no_solution, os.str());
  }
  std::uintmax_t iters = 200;
  auto tol = [&](double a, double b) {
    return std::abs(b - a) < 1e-15 || std::abs(f(0.5 * (a + b))) < 1e-11;
  };
  auto [a, b] = boost::math::tools::toms748_solve(f, y_lo, y_hi, f_lo, f_hi, tol, iters);
  // the stopping test looks at the midpoint, so it is a candidate too
  double best = a;
  for (double y : {b, 0.5 * (a + b)}) {
    if (std::abs(f(y)) < std::abs(f(best))) best = y;
  }
  return best;
}

OcpCurve load_ocp(std::string_view tag_or_path) {
  const std::filesystem::path direct{std::string(tag_or_path)};
  if (std::filesystem::is_regular_file(direct)) return OcpCurve::load(direct);
  const auto file = data_dir() / "ocp" / (std::string(tag_or_path) + ".dat");
  if (!std::filesystem::is_regular_file(file)) {
    throw Error(ErrorKind::io, "no OCP table for '" + std::string(tag_or_path) + "'");
  }
  return OcpCurve::load(file);
}

OcpPair load_ocp_pair(const CellParameters& p) {
  return OcpPair{load_ocp(p.neg.ocp), load_ocp(p.pos.ocp)};
}

}  // namespace lisim
