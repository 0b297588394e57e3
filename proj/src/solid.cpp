#include "lisim/solid.hpp"

#include <cmath>

#include "lisim/error.hpp"

namespace lisim {

double electrode_average(std::span<const double, 4> values) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += kAverageWeights[i] * values[i];
  return s;
}

BulkStep step_bulk(double cs_bulk, double jn, double Rs, double dt, double cs_max) {
  if (!(dt > 0)) throw Error(ErrorKind::invalid_input, "step_bulk: dt must be positive");
  const double next = cs_bulk - 3.0 * dt * jn / Rs;
  if (next < kSurfaceMargin) return {kSurfaceMargin, true};
  if (next > cs_max - kSurfaceMargin) return {cs_max - kSurfaceMargin, true};
  return {next, false};
}

double offset_time_constant(double ks, double Rs, double Ds) noexcept { return ks * Rs * Rs / Ds; }

double offset_gain(double jn, double Rs, double Ds) noexcept { return -Rs * jn / (5.0 * Ds); }

double step_offset(double w, double jn, double Ds, double Rs, double ks, double dt) noexcept {
  const double e = -std::expm1(-dt / offset_time_constant(ks, Rs, Ds));
  return w + (offset_gain(jn, Rs, Ds) - w) * e;
}

SurfaceConc surface_conc(double cs_bulk, double w, double cs_max) noexcept {
  const double raw = cs_bulk + w;
  if (raw < kSurfaceMargin) return {kSurfaceMargin, true};
  if (raw > cs_max - kSurfaceMargin) return {cs_max - kSurfaceMargin, true};
  return {raw, false};
}

}  // namespace lisim
