#include "lisim/small_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "lisim/error.hpp"

namespace lisim {

Vec4 solve4(Mat4 a, Vec4 b) {
  for (int k = 0; k < 4; ++k) {
    int piv = k;
    for (int i = k + 1; i < 4; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    }
    if (a[piv][k] == 0.0) throw Error(ErrorKind::singular, "4x4 system is singular");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < 4; ++i) {
      const double f = a[i][k] / a[k][k];
      for (int j = k; j < 4; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  Vec4 x{};
  for (int i = 3; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < 4; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

Mat4 inverse4(const Mat4& a) {
  Mat4 inv{};
  for (int j = 0; j < 4; ++j) {
    Vec4 e{};
    e[j] = 1.0;
    const Vec4 col = solve4(a, e);
    for (int i = 0; i < 4; ++i) inv[i][j] = col[i];
  }
  return inv;
}

double norm_inf(const Mat4& a) {
  double n = 0.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    n = std::max(n, s);
  }
  return n;
}

double equilibrated_condition(const Mat4& a) {
  Mat4 s = a;
  for (auto& row : s) {
    double m = 0.0;
    for (double v : row) m = std::max(m, std::abs(v));
    if (m == 0.0) throw Error(ErrorKind::singular, "4x4 matrix has a zero row");
    for (double& v : row) v /= m;
  }
  for (int j = 0; j < 4; ++j) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(s[i][j]));
    if (m == 0.0) throw Error(ErrorKind::singular, "4x4 matrix has a zero column");
    for (int i = 0; i < 4; ++i) s[i][j] /= m;
  }
  return norm_inf(s) * norm_inf(inverse4(s));
}

}  // namespace lisim
