#pragma once

#include <array>
#include <span>

namespace lisim {

// Collocation weights for the electrode average on {0, L/3, 2L/3, L}.
inline constexpr std::array<double, 4> kAverageWeights{0.125, 0.375, 0.375, 0.125};
// Surface concentration is kept this far (mol/m^3) inside (0, cs_max).
inline constexpr double kSurfaceMargin = 1.0;

// Bulk and surface-offset states of one electrode.
struct ElectrodeSolid {
  std::array<double, 4> bulk{};
  std::array<double, 4> offset{};
};

struct SolidState {
  ElectrodeSolid neg;
  ElectrodeSolid pos;
};

double electrode_average(std::span<const double, 4> values) noexcept;

struct BulkStep {
  double value = 0.0;
  bool saturated = false;
};

// c_bulk - 3 dt jn / Rs, clamped into [kSurfaceMargin, cs_max - kSurfaceMargin].
BulkStep step_bulk(double cs_bulk, double jn, double Rs, double dt, double cs_max);

double offset_time_constant(double ks, double Rs, double Ds) noexcept;
double offset_gain(double jn, double Rs, double Ds) noexcept;
double step_offset(double w, double jn, double Ds, double Rs, double ks, double dt) noexcept;

struct SurfaceConc {
  double value = 0.0;
  bool clamped = false;
};

SurfaceConc surface_conc(double cs_bulk, double w, double cs_max) noexcept;

}  // namespace lisim
