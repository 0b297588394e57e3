#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lisim/params.hpp"

namespace lisim {

// Tabulated equilibrium potential U(y) with a monotone C1 cubic (Fritsch-Carlson) interpolant.
class OcpCurve {
 public:
  OcpCurve(std::string material, std::vector<double> y, std::vector<double> u);

  // Two-column text file (y U) with a `# material=<tag>` header.
  static OcpCurve load(const std::filesystem::path& file);

  const std::string& material() const noexcept { return material_; }
  std::span<const double> y_knots() const noexcept { return y_; }
  std::span<const double> u_knots() const noexcept { return u_; }
  double y_min() const noexcept { return y_.front(); }
  double y_max() const noexcept { return y_.back(); }
  // -1 for a curve that decreases with y, +1 for increasing.
  int direction() const noexcept { return direction_; }

  // Outside the knot span (but inside [0,1]) extrapolates linearly and sets *extrapolated.
  double potential(double y, bool* extrapolated = nullptr) const;
  double slope(double y) const;
  // y in [y_lo, y_hi] with |potential(y) - u| < 1e-9 V.
  double inverse(double u, double y_lo, double y_hi) const;

 private:
  std::size_t segment(double y) const;

  std::string material_;
  std::vector<double> y_;
  std::vector<double> u_;
  std::vector<double> d_;
  int direction_ = -1;
};

// Resolves a material tag through data_dir()/ocp/<tag>.dat, or loads a path directly.
OcpCurve load_ocp(std::string_view tag_or_path);

struct OcpPair {
  OcpCurve neg;
  OcpCurve pos;
  const OcpCurve& operator[](Electrode e) const noexcept {
    return e == Electrode::negative ? neg : pos;
  }
};

OcpPair load_ocp_pair(const CellParameters& p);

}  // namespace lisim
