#include "lisim/corrector.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "lisim/error.hpp"

namespace lisim {

void CorrectorConfig::validate() const {
  if (!(threshold > 0)) throw Error(ErrorKind::invalid_input, "corrector threshold must be > 0");
  if (!(tau[0] > 0) || !(tau[1] > 0)) {
    throw Error(ErrorKind::invalid_input, "corrector time constants must be > 0");
  }
  if (!(max_dy_pos > 0 && max_dy_pos < 1)) {
    throw Error(ErrorKind::invalid_input, "corrector stoichiometry bound must lie in (0,1)");
  }
}

double interface_overpotential(const CellParameters& p, const BoundaryKinetics& at_neg,
                               const BoundaryKinetics& at_pos, double T) {
  const double pos = p.faraday * p.pos.film_resistance * at_pos.jn +
                     bv_overpotential(p, at_pos.jn, at_pos.i0, T);
  const double neg = p.faraday * p.neg.film_resistance * at_neg.jn +
                     bv_overpotential(p, at_neg.jn, at_neg.i0, T);
  return pos - neg;
}

double back_out_ocv(const CellParameters& p, double v_measured, const VoltageBreakdown& b,
                    const BoundaryKinetics& at_neg, const BoundaryKinetics& at_pos, double T,
                    double current) {
  return v_measured - b.electrolyte_drop() + p.contact_resistance * current -
         interface_overpotential(p, at_neg, at_pos, T);
}

double correction_ratio(const CellParameters& p) noexcept {
  return (p.pos.area * p.pos.thickness * p.pos.eps_s * p.pos.cs_max) /
         (p.neg.area * p.neg.thickness * p.neg.eps_s * p.neg.cs_max);
}

Correction solve_correction(const CellParameters& p, const OcpPair& ocp, double ocv_target,
                            double y_neg, double y_pos, double max_dy_pos) {
  const double r = correction_ratio(p);
  // Keep both stoichiometries inside [0,1].
  double lo = std::max(-max_dy_pos, -y_pos);
  double hi = std::min(max_dy_pos, 1.0 - y_pos);
  lo = std::max(lo, (y_neg - 1.0) / r);
  hi = std::min(hi, y_neg / r);
  if (!(hi > lo)) throw Error(ErrorKind::no_solution, "correction: empty stoichiometry bracket");

  auto f = [&](double d) {
    return ocp.pos.potential(y_pos + d) - ocp.neg.potential(y_neg - r * d) - ocv_target;
  };
  Correction c;
  const double f0 = f(0.0);
  if (std::abs(f0) < 1e-12) return c;
  // f decreases with dy+; a positive residual needs dy+ > 0.
  const double flo = f(lo), fhi = f(hi);
  double root;
  if (flo * fhi > 0.0) {
    root = std::abs(flo) < std::abs(fhi) ? lo : hi;
    c.limited = true;
  } else {
    std::uintmax_t iters = 200;
    auto tol = [&](double a, double b) {
      return std::abs(b - a) < 1e-16 || std::abs(f(0.5 * (a + b))) < 1e-11;
    };
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    root = std::abs(f(a)) <= std::abs(f(b)) ? a : b;
  }
  c.dy_pos = root;
  c.dy_neg = -r * root;
  return c;
}

double pending_tail(double dcs, double tau, double dt) noexcept {
  const double e = std::exp(-dt / tau);
  return e * dcs / (1.0 - e);
}

void issue_correction(const CellParameters& p, const CorrectorConfig& cfg, CellState& s,
                      const Correction& c, double dt) {
  const double need_neg = p.neg.cs_max * c.dy_neg;
  const double need_pos = p.pos.cs_max * c.dy_pos;
  s.pending[0] = need_neg - pending_tail(s.dcs[0], cfg.tau[0], dt);
  s.pending[1] = need_pos - pending_tail(s.dcs[1], cfg.tau[1], dt);
}

CorrectionStep advance_correction(const CellParameters& p, const CorrectorConfig& cfg,
                                  CellState& s, double dt) {
  CorrectionStep out;
  for (int k = 0; k < 2; ++k) {
    const double e = std::exp(-dt / cfg.tau[k]);
    s.dcs[k] = e * s.dcs[k] + (1.0 - e) * s.pending[k];
    s.pending[k] = 0.0;
  }
  if (s.dcs[0] == 0.0 && s.dcs[1] == 0.0) return out;

  // Largest common fraction of the shift that keeps every bulk point inside its range.
  double scale = 1.0;
  const std::array<const ElectrodeSolid*, 2> es{&s.solid.neg, &s.solid.pos};
  const std::array<double, 2> cmax{p.neg.cs_max, p.pos.cs_max};
  for (int k = 0; k < 2; ++k) {
    const double d = s.dcs[k];
    if (d == 0.0) continue;
    for (double c : es[k]->bulk) {
      const double room = d > 0 ? (cmax[k] - kSurfaceMargin - c) : (c - kSurfaceMargin);
      scale = std::min(scale, std::max(0.0, room) / std::abs(d));
    }
  }
  const double before = solid_lithium(p, s.solid);
  for (int k = 0; k < 2; ++k) {
    out.shift[k] = scale * s.dcs[k];
    ElectrodeSolid& target = k == 0 ? s.solid.neg : s.solid.pos;
    for (double& c : target.bulk) c += out.shift[k];
  }
  out.scale = scale;
  out.lithium_change = (solid_lithium(p, s.solid) - before) / before;
  return out;
}

}  // namespace lisim
