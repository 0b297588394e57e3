#include "lisim/stabilizer.hpp"

#include <cmath>

#include "lisim/error.hpp"

namespace lisim {

void SGFConfig::validate() const {
  if (window < 3 || window % 2 == 0) {
    throw Error(ErrorKind::invalid_input, "SG window must be odd and >= 3");
  }
  if (order < 0 || order >= window) {
    throw Error(ErrorKind::invalid_input, "SG order must lie in [0, window)");
  }
  if (lookback < 1 || min_sign_changes < 1 || !(amplitude_fraction >= 0)) {
    throw Error(ErrorKind::invalid_input, "bad oscillation detector thresholds");
  }
}

Eigen::MatrixXd sg_matrix(int order, int window) {
  SGFConfig{order, window}.validate();
  const int half = (window - 1) / 2;
  Eigen::MatrixXd X(window, order + 1);
  for (int i = 0; i < window; ++i) {
    const double x = i - half;
    double v = 1.0;
    for (int j = 0; j <= order; ++j, v *= x) X(i, j) = v;
  }
  // X (X^T X)^-1 X^T through a QR factorization: Q Q^T.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(window, order + 1);
  return Q * Q.transpose();
}

OscillationStats oscillation_stats(std::span<const double> history, int lookback) {
  OscillationStats s;
  const std::size_t want = static_cast<std::size_t>(lookback) + 2;
  const std::size_t n = std::min(history.size(), want);
  if (n < 3) return s;
  const auto tail = history.subspan(history.size() - n);
  std::vector<double> d(n - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    d[i] = tail[i + 1] - tail[i];
    sum += std::abs(d[i]);
  }
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    ++s.comparisons;
    if (d[i] * d[i + 1] < 0.0) ++s.sign_changes;
  }
  s.amplitude = 0.5 * sum / static_cast<double>(d.size());
  return s;
}

bool detect_oscillation(std::span<const double> history, double cs_max, const SGFConfig& cfg) {
  if (history.size() < 8) return false;
  const OscillationStats s = oscillation_stats(history, cfg.lookback);
  return s.sign_changes >= cfg.min_sign_changes && s.amplitude > cfg.amplitude_fraction * cs_max;
}

std::vector<double> smooth_tail(std::span<const double> sequence, const Eigen::MatrixXd& B) {
  const auto m = static_cast<std::size_t>(B.rows());
  if (sequence.size() < m) {
    throw Error(ErrorKind::invalid_input, "smooth_tail: sequence shorter than the window");
  }
  const auto tail = sequence.subspan(sequence.size() - m);
  const Eigen::Map<const Eigen::VectorXd> raw(tail.data(), static_cast<Eigen::Index>(m));
  const Eigen::VectorXd out = B * raw;
  return {out.data(), out.data() + out.size()};
}

Stabilizer::Stabilizer(SGFConfig cfg) : cfg_(cfg), B_(sg_matrix(cfg.order, cfg.window)) {
  cfg_.validate();
}

bool Stabilizer::update(const CellParameters& p, CellState& state,
                        const std::array<double, 8>& css) {
  const auto m = static_cast<std::size_t>(cfg_.window);
  bool triggered = false;
  for (int k = 0; k < 8; ++k) {
    auto& h = history_[k];
    h.push_back(css[k]);
    while (h.size() > m) h.pop_front();
    const double cs_max = k < 4 ? p.neg.cs_max : p.pos.cs_max;
    const std::vector<double> buf(h.begin(), h.end());
    if (detect_oscillation(buf, cs_max, cfg_)) triggered = true;
  }
  if (triggered) remaining_ = cfg_.window;
  if (remaining_ <= 0) return false;
  --remaining_;
  if (history_[0].size() < m) return false;

  for (int k = 0; k < 8; ++k) {
    auto& h = history_[k];
    const std::vector<double> buf(h.begin(), h.end());
    const std::vector<double> smoothed = smooth_tail(buf, B_);
    std::copy(smoothed.begin(), smoothed.end(), h.begin());
    ElectrodeSolid& es = state.electrode(k < 4 ? Electrode::negative : Electrode::positive);
    const int i = k % 4;
    es.offset[i] = smoothed.back() - es.bulk[i];
  }
  return true;
}

}  // namespace lisim
