#pragma once

#include <Eigen/Dense>
#include <array>
#include <deque>
#include <span>
#include <vector>

#include "lisim/params.hpp"
#include "lisim/state.hpp"

namespace lisim {

struct SGFConfig {
  int order = 2;          // N_SG
  int window = 49;        // M_SG, odd
  int lookback = 8;       // sign-change comparisons examined
  int min_sign_changes = 5;
  double amplitude_fraction = 1e-3;  // of cs_max
  void validate() const;
};

// Least-squares polynomial projection on abscissae -(M-1)/2 .. (M-1)/2.
Eigen::MatrixXd sg_matrix(int order, int window);

// Sign changes of the first difference among the last `lookback` comparisons, and
// half the mean absolute difference over the same samples.
struct OscillationStats {
  int sign_changes = 0;
  int comparisons = 0;
  double amplitude = 0.0;
};

OscillationStats oscillation_stats(std::span<const double> history, int lookback);
// Needs at least 8 samples; fewer returns false.
bool detect_oscillation(std::span<const double> history, double cs_max, const SGFConfig& cfg);

// B * tail of the last M samples.
std::vector<double> smooth_tail(std::span<const double> sequence, const Eigen::MatrixXd& B);

// Per-cell css history and activation state.
class Stabilizer {
 public:
  explicit Stabilizer(SGFConfig cfg = {});

  const SGFConfig& config() const noexcept { return cfg_; }
  const Eigen::MatrixXd& matrix() const noexcept { return B_; }
  bool active() const noexcept { return remaining_ > 0; }

  // Appends the current css values (neg x1..x4, pos x1..x4). When an oscillation is
  // detected (or the hysteresis is still running) and enough history exists, smooths every
  // sequence and writes the smoothed current value back into the offsets. Returns true
  // when the state changed.
  bool update(const CellParameters& p, CellState& state, const std::array<double, 8>& css);

 private:
  SGFConfig cfg_;
  Eigen::MatrixXd B_;
  std::array<std::deque<double>, 8> history_;
  int remaining_ = 0;
};

}  // namespace lisim
