#include "lisim/reaction.hpp"

#include <cmath>

#include "lisim/error.hpp"
#include "lisim/small_linalg.hpp"

namespace lisim {

namespace {

// sinh(l x) / sinh(l L) without overflow; x/L in the l -> 0 limit.
double sinh_ratio(double l, double x, double L) noexcept {
  if (l * L < 1e-8) return x / L;
  return std::exp(-l * (L - x)) * (-std::expm1(-2.0 * l * x)) / (-std::expm1(-2.0 * l * L));
}

// d/dx of sinh_ratio.
double sinh_ratio_slope(double l, double x, double L) noexcept {
  if (l * L < 1e-8) return 1.0 / L;
  return l * std::exp(-l * (L - x)) * (1.0 + std::exp(-2.0 * l * x)) / (-std::expm1(-2.0 * l * L));
}

}  // namespace

CollocationGrid collocation_grid(double length) noexcept {
  return {{0.0, length / 3.0, 2.0 * length / 3.0, length}, length};
}

double exchange_current(double kr, double ce, double css, double cs_max) noexcept {
  const double prod = ce * css * (cs_max - css);
  return prod > 0.0 ? kr * std::sqrt(prod) : 0.0;
}

LinearizedBV linearize_bv(const CellParameters& p, double T, double i0_mean, double jn_mean) {
  if (!(i0_mean > 0)) {
    throw Error(ErrorKind::degenerate, "linearize_bv: exchange current must be positive");
  }
  const double rt = p.gas_constant * T;
  const double z = p.faraday * jn_mean / (2.0 * i0_mean);
  LinearizedBV out;
  out.a = rt / i0_mean / std::sqrt(1.0 + z * z);
  out.b = 2.0 * rt / p.faraday * std::asinh(z) - out.a * jn_mean;
  return out;
}

double linearized_slope_expanded(const CellParameters& p, double T, double i0_mean,
                                 double jn_mean) noexcept {
  const double z = p.faraday * jn_mean / (2.0 * i0_mean);
  const double root = std::sqrt(p.faraday * p.faraday * jn_mean * jn_mean /
                                    (4.0 * i0_mean * i0_mean) + 1.0);
  return p.gas_constant * T / i0_mean * (root + z) / (z * root + z * z + 1.0);
}

CubicFit ocp_cubic_fit(std::span<const double, 4> u, const CollocationGrid& grid) {
  const double L = grid.length;
  Mat4 v{};
  Vec4 rhs{};
  for (int i = 0; i < 4; ++i) {
    const double xi = grid.x[i] / L;
    v[i] = {xi * xi * xi, xi * xi, xi, 1.0};
    rhs[i] = u[i];
  }
  const Vec4 c = solve4(v, rhs);
  return {c[0] / (L * L * L), c[1] / (L * L), c[2] / L, c[3]};
}

double mean_flux(const CellParameters& p, Electrode e, double current) noexcept {
  const ElectrodeParams& el = p.electrode(e);
  const double s = e == Electrode::negative ? 1.0 : -1.0;
  return s * current / (el.specific_area * p.faraday * el.area * el.thickness);
}

double ReactionSolution::J(double x) const noexcept {
  if (mode == JnMode::uniform) {
    return side == Electrode::negative ? jn_mean * x : jn_mean * (length - x);
  }
  return rL * sinh_ratio(lambda, x, length) + r0 * sinh_ratio(lambda, length - x, length) +
         (alpha * x + beta) * x + gamma;
}

double ReactionSolution::flux(double x) const noexcept {
  if (mode == JnMode::uniform) return jn_mean;
  const double dJ = rL * sinh_ratio_slope(lambda, x, length) -
                    r0 * sinh_ratio_slope(lambda, length - x, length) + 2.0 * alpha * x + beta;
  return sign() * dJ;
}

double ReactionSolution::integral_J() const noexcept {
  const double L = length;
  if (mode == JnMode::uniform) return jn_mean * L * L / 2.0;
  const double hom = lambda * L < 1e-8 ? L / 2.0 : std::tanh(lambda * L / 2.0) / lambda;
  return (rL + r0) * hom + alpha * L * L * L / 3.0 + beta * L * L / 2.0 + gamma * L;
}

ReactionSolution jn_profile(const CellParameters& p, Electrode e, const ElectrodeConditions& c) {
  const ElectrodeParams& el = p.electrode(e);
  const CollocationGrid grid = collocation_grid(el.thickness);
  ReactionSolution r;
  r.side = e;
  r.mode = JnMode::analytic;
  r.length = el.thickness;
  r.current = c.current;

  double ce_mean = 0.0, css_mean = 0.0;
  for (int i = 0; i < 4; ++i) {
    ce_mean += c.ce[i] / 4.0;
    css_mean += c.css[i] / 4.0;
  }
  r.i0_mean = exchange_current(c.kr, ce_mean, css_mean, el.cs_max);
  r.jn_mean = mean_flux(p, e, c.current);
  r.bv = linearize_bv(p, c.T, r.i0_mean, r.jn_mean);
  r.ocp_fit = ocp_cubic_fit(c.ocp, grid);

  const double sigma = solid_conductivity_eff(p, e);
  const double grad = 2.0 * c.a_e * c.kappa_D_mean / (c.b_e * c.kappa_mean);
  r.k1 = el.specific_area * p.faraday * (1.0 / sigma + 1.0 / c.kappa_mean);
  r.k2 = r.bv.a + p.faraday * el.film_resistance;
  r.k3 = -3.0 * r.ocp_fit.a;
  r.k4 = grad - 2.0 * r.ocp_fit.b;
  r.k5 = -c.current / (el.area * sigma) - r.ocp_fit.c;
  if (e == Electrode::positive) r.k5 -= grad * el.thickness;
  if (!(r.k2 > 0)) throw Error(ErrorKind::degenerate, "jn_profile: k2 must be positive");
  if (!(r.k1 > 0)) throw Error(ErrorKind::degenerate, "jn_profile: k1 must be positive");

  const double s = r.sign();
  r.lambda = std::sqrt(r.k1 / r.k2);
  r.alpha = -s * r.k3 / r.k1;
  r.beta = -s * r.k4 / r.k1;
  r.gamma = -s * (2.0 * r.k2 * r.k3 / r.k1 + r.k5) / r.k1;

  const double total = c.current / (el.specific_area * el.area * p.faraday);
  const double J0 = e == Electrode::negative ? 0.0 : -total;
  const double JL = e == Electrode::negative ? total : 0.0;
  const double L = r.length;
  r.r0 = J0 - r.gamma;
  r.rL = JL - ((r.alpha * L + r.beta) * L + r.gamma);

  // Same solution on the e^{-lambda x}, e^{-lambda (L - x)} basis.
  const double E = std::exp(-r.lambda * L);
  const double norm = -std::expm1(-2.0 * r.lambda * L);
  if (norm > 0.0) {
    r.m1 = (r.r0 - r.rL * E) / norm;
    r.m2 = (r.rL - r.r0 * E) / norm;
  }
  for (int i = 0; i < 4; ++i) r.jn[i] = r.flux(grid.x[i]);
  return r;
}

ReactionSolution jn_uniform(const CellParameters& p, Electrode e, double current) {
  ReactionSolution r;
  r.side = e;
  r.mode = JnMode::uniform;
  r.length = p.electrode(e).thickness;
  r.current = current;
  r.jn_mean = mean_flux(p, e, current);
  r.jn.fill(r.jn_mean);
  return r;
}

}  // namespace lisim
