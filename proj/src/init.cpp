#include "lisim/init.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <optional>
#include <sstream>

#include "lisim/error.hpp"

namespace lisim {

namespace {

constexpr double kWindowTol = 1e-10;

struct WindowSystem {
  const OcpPair& ocp;
  double dn, dp, v_min, v_max;

  std::array<double, 2> residual(double y0p, double y0n) const {
    return {ocp.pos.potential(y0p) - ocp.neg.potential(y0n + dn) - v_max,
            ocp.pos.potential(y0p + dp) - ocp.neg.potential(y0n) - v_min};
  }
};

std::optional<std::array<double, 2>> newton(const WindowSystem& s, double y0p, double y0n) {
  const double hp = 1.0 - s.dp, hn = 1.0 - s.dn;
  auto norm = [](const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); };
  auto r = s.residual(y0p, y0n);
  for (int it = 0; it < 100; ++it) {
    if (norm(r) < kWindowTol) return std::array<double, 2>{y0p, y0n};
    const double a = s.ocp.pos.slope(y0p), b = -s.ocp.neg.slope(y0n + s.dn);
    const double c = s.ocp.pos.slope(y0p + s.dp), d = -s.ocp.neg.slope(y0n);
    const double det = a * d - b * c;
    if (!(std::abs(det) > 0)) return std::nullopt;
    const double sp = -(d * r[0] - b * r[1]) / det;
    const double sn = -(a * r[1] - c * r[0]) / det;
    double damp = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, damp *= 0.5) {
      const double np = std::clamp(y0p + damp * sp, 0.0, hp);
      const double nn = std::clamp(y0n + damp * sn, 0.0, hn);
      const auto nr = s.residual(np, nn);
      if (norm(nr) < norm(r)) {
        y0p = np;
        y0n = nn;
        r = nr;
        accepted = true;
        break;
      }
    }
    if (!accepted) return std::nullopt;
  }
  return std::nullopt;
}

// Eliminates y0+ through the V_max equation and brackets the V_min equation in y0-.
std::optional<std::array<double, 2>> bisection(const WindowSystem& s) {
  const double hp = 1.0 - s.dp, hn = 1.0 - s.dn;
  auto y0p_of = [&](double y0n) -> std::optional<double> {
    try {
      return s.ocp.pos.inverse(s.v_max + s.ocp.neg.potential(y0n + s.dn), 0.0, hp);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  auto g = [&](double y0n) -> std::optional<double> {
    const auto y0p = y0p_of(y0n);
    if (!y0p) return std::nullopt;
    return s.residual(*y0p, y0n)[1];
  };
  constexpr int n = 400;
  std::optional<double> prev_g;
  double prev_y = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = hn * i / n;
    const auto gy = g(y);
    if (gy && prev_g && (*gy) * (*prev_g) <= 0.0) {
      auto f = [&](double x) { return g(x).value_or(0.0); };
      std::uintmax_t iters = 200;
      auto tol = [](double a, double b) { return std::abs(b - a) < 1e-15; };
      auto [a, b] = boost::math::tools::toms748_solve(f, prev_y, y, *prev_g, *gy, tol, iters);
      const double root = std::abs(f(a)) < std::abs(f(b)) ? a : b;
      return std::array<double, 2>{*y0p_of(root), root};
    }
    if (gy) {
      prev_g = gy;
      prev_y = y;
    }
  }
  return std::nullopt;
}

}  // namespace

double window_span(const CellParameters& p, Electrode e, double capacity_mAh) noexcept {
  const ElectrodeParams& el = p.electrode(e);
  return 3.6 * capacity_mAh / (p.faraday * el.area * el.thickness * el.cs_max * el.eps_s);
}

double WindowResiduals::max_abs() const noexcept {
  return std::max({std::abs(v_max), std::abs(v_min), std::abs(cap_neg), std::abs(cap_pos)});
}

StoichiometryWindow solve_window(const CellParameters& p, const OcpPair& ocp, double v_min,
                                 double v_max, double capacity_mAh) {
  if (!(v_max > v_min)) throw Error(ErrorKind::invalid_input, "solve_window: V_max <= V_min");
  if (!(capacity_mAh > 0)) throw Error(ErrorKind::invalid_input, "solve_window: Qc <= 0");
  const double dn = window_span(p, Electrode::negative, capacity_mAh);
  const double dp = window_span(p, Electrode::positive, capacity_mAh);
  if (!(dn < 1.0) || !(dp < 1.0)) {
    std::ostringstream os;
    os << "capacity " << capacity_mAh << " mAh needs stoichiometry swings " << dn << " (neg) and "
       << dp << " (pos); both must be below 1";
    throw Error(ErrorKind::capacity, os.str());
  }
  const WindowSystem sys{ocp, dn, dp, v_min, v_max};
  auto sol = newton(sys, std::min(0.05, 1.0 - dp), std::min(0.02, 1.0 - dn));
  if (!sol) sol = bisection(sys);
  if (!sol) {
    throw Error(ErrorKind::window, "no stoichiometry window satisfies the voltage limits");
  }
  StoichiometryWindow w;
  w.y0_pos = (*sol)[0];
  w.y0_neg = (*sol)[1];
  w.y1_pos = w.y0_pos + dp;
  w.y1_neg = w.y0_neg + dn;
  w.capacity_mAh = capacity_mAh;
  w.v_min = v_min;
  w.v_max = v_max;
  if (!(w.y0_neg > 0 && w.y1_neg < 1 && w.y0_pos > 0 && w.y1_pos < 1)) {
    throw Error(ErrorKind::window, "stoichiometry window leaves (0,1)");
  }
  return w;
}

StoichiometryWindow solve_window(const CellParameters& p, const OcpPair& ocp) {
  return solve_window(p, ocp, p.operating.v_min, p.operating.v_max, p.operating.capacity_mAh);
}

WindowResiduals window_residuals(const CellParameters& p, const OcpPair& ocp,
                                 const StoichiometryWindow& w) {
  WindowResiduals r;
  r.v_max = ocp.pos.potential(w.y0_pos) - ocp.neg.potential(w.y1_neg) - w.v_max;
  r.v_min = ocp.pos.potential(w.y1_pos) - ocp.neg.potential(w.y0_neg) - w.v_min;
  const double dn = window_span(p, Electrode::negative, w.capacity_mAh);
  const double dp = window_span(p, Electrode::positive, w.capacity_mAh);
  r.cap_neg = (w.span_neg() - dn) / dn;
  r.cap_pos = (w.span_pos() - dp) / dp;
  return r;
}

double ocv_at_soc(const OcpPair& ocp, const StoichiometryWindow& w, double soc) {
  return ocp.pos.potential(w.y_pos(soc)) - ocp.neg.potential(w.y_neg(soc));
}

SocOcvTable soc_ocv_curve(const StoichiometryWindow& w, const OcpPair& ocp, int n_points) {
  if (n_points < 2) throw Error(ErrorKind::invalid_input, "soc_ocv_curve: need >= 2 points");
  SocOcvTable t;
  t.soc.resize(n_points);
  t.ocv.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double s = static_cast<double>(i) / (n_points - 1);
    t.soc[i] = s;
    t.ocv[i] = ocv_at_soc(ocp, w, s);
  }
  return t;
}

double SocOcvTable::ocv_at(double s) const {
  if (s <= soc.front()) return ocv.front();
  if (s >= soc.back()) return ocv.back();
  const auto it = std::upper_bound(soc.begin(), soc.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - soc.begin()) - 1;
  const double t = (s - soc[k]) / (soc[k + 1] - soc[k]);
  return ocv[k] + t * (ocv[k + 1] - ocv[k]);
}

double SocOcvTable::soc_at(double v) const {
  // ocv increases with soc
  if (v <= ocv.front()) return soc.front();
  if (v >= ocv.back()) return soc.back();
  const auto it = std::upper_bound(ocv.begin(), ocv.end(), v);
  const std::size_t k = static_cast<std::size_t>(it - ocv.begin()) - 1;
  const double t = (v - ocv[k]) / (ocv[k + 1] - ocv[k]);
  return soc[k] + t * (soc[k + 1] - soc[k]);
}

double soc_from_ocv(const OcpPair& ocp, const StoichiometryWindow& w, double v) {
  if (!(v >= w.v_min - 1e-9 && v <= w.v_max + 1e-9)) {
    std::ostringstream os;
    os << "initial OCV " << v << " V outside [" << w.v_min << ", " << w.v_max << "]";
    throw Error(ErrorKind::invalid_input, os.str());
  }
  auto f = [&](double s) { return ocv_at_soc(ocp, w, s) - v; };
  const double f0 = f(0.0), f1 = f(1.0);
  if (std::abs(f0) < 1e-12) return 0.0;
  if (std::abs(f1) < 1e-12) return 1.0;
  if (f0 * f1 > 0) return std::abs(f0) < std::abs(f1) ? 0.0 : 1.0;
  std::uintmax_t iters = 200;
  auto tol = [&](double a, double b) { return std::abs(b - a) < 1e-14; };
  auto [a, b] = boost::math::tools::toms748_solve(f, 0.0, 1.0, f0, f1, tol, iters);
  return 0.5 * (a + b);
}

CellState initialize_state(const CellParameters& p, const StoichiometryWindow& w, double soc0,
                           double T_amb) {
  if (!(soc0 >= 0.0 && soc0 <= 1.0)) {
    throw Error(ErrorKind::invalid_input, "initial SOC must lie in [0,1]");
  }
  if (!(T_amb > 0)) throw Error(ErrorKind::invalid_input, "ambient temperature must be positive");
  CellState s;
  s.solid.neg.bulk.fill(p.neg.cs_max * w.y_neg(soc0));
  s.solid.pos.bulk.fill(p.pos.cs_max * w.y_pos(soc0));
  s.qe = initial_electrolyte(p);
  s.T = T_amb;
  s.lag_ce = {p.ce0, p.ce0};
  return s;
}

}  // namespace lisim
