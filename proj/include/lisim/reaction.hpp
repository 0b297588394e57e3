#pragma once

#include <array>
#include <span>

#include "lisim/params.hpp"

namespace lisim {

struct CollocationGrid {
  std::array<double, 4> x{};
  double length = 0.0;
};

// {0, L/3, 2L/3, L} in local electrode coordinates.
CollocationGrid collocation_grid(double length) noexcept;

double exchange_current(double kr, double ce, double css, double cs_max) noexcept;

// eta(jn) ~ a jn + b, tangent to (2RT/F) asinh(F jn / (2 i0)) at jn_mean.
struct LinearizedBV {
  double a = 0.0;
  double b = 0.0;
};

LinearizedBV linearize_bv(const CellParameters& p, double T, double i0_mean, double jn_mean);
// The slope written out in the long unsimplified form; equal to linearize_bv(...).a.
double linearized_slope_expanded(const CellParameters& p, double T, double i0_mean,
                                 double jn_mean) noexcept;

// U(x) = a x^3 + b x^2 + c x + d in local coordinates.
struct CubicFit {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double operator()(double x) const noexcept { return ((a * x + b) * x + c) * x + d; }
  double derivative(double x) const noexcept { return (3.0 * a * x + 2.0 * b) * x + c; }
};

CubicFit ocp_cubic_fit(std::span<const double, 4> u, const CollocationGrid& grid);

// Mean pore-wall flux: +I/(as F A L) for the negative electrode, -I/(...) for the positive.
double mean_flux(const CellParameters& p, Electrode e, double current) noexcept;

// Everything jn_profile needs for one electrode at one instant.
struct ElectrodeConditions {
  std::array<double, 4> ce{};
  std::array<double, 4> css{};
  std::array<double, 4> ocp{};  // U at css
  double a_e = 0.0;             // electrolyte parabola coefficients of this electrode
  double b_e = 0.0;
  double kappa_mean = 0.0;      // mean effective conductivity
  double kappa_D_mean = 0.0;    // mean effective diffusional conductivity
  double kr = 0.0;
  double T = 0.0;
  double current = 0.0;
};

enum class JnMode { analytic, uniform };

// Closed-form jn over one electrode. J is the running integral of jn measured from the
// collector (negative) or towards the collector (positive); jn = s J' with s = +1 / -1.
struct ReactionSolution {
  Electrode side = Electrode::negative;
  JnMode mode = JnMode::analytic;
  double length = 0.0;
  double current = 0.0;
  double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0, k5 = 0.0;
  LinearizedBV bv;
  double i0_mean = 0.0;
  double jn_mean = 0.0;
  CubicFit ocp_fit;
  double lambda = 0.0;
  // J = m1 e^{-lambda x} + m2 e^{-lambda (L - x)} + alpha x^2 + beta x + gamma
  double m1 = 0.0, m2 = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  std::array<double, 4> jn{};

  double J(double x) const noexcept;
  double flux(double x) const noexcept;
  double integral_J() const noexcept;
  // Exact integral of jn over the electrode.
  double integral_flux() const noexcept { return sign() * (J(length) - J(0.0)); }
  double sign() const noexcept { return side == Electrode::negative ? 1.0 : -1.0; }

  // Boundary amplitudes on the normalized basis sinh(lambda x)/sinh(lambda L) and its mirror.
  double r0 = 0.0, rL = 0.0;
};

ReactionSolution jn_profile(const CellParameters& p, Electrode e, const ElectrodeConditions& c);
ReactionSolution jn_uniform(const CellParameters& p, Electrode e, double current);

}  // namespace lisim
