#pragma once

#include <array>

namespace lisim {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

// Gaussian elimination with partial pivoting. Throws Error(singular) on a zero pivot.
Vec4 solve4(Mat4 a, Vec4 b);
Mat4 inverse4(const Mat4& a);
double norm_inf(const Mat4& a);
// Infinity-norm condition number after row and column equilibration.
double equilibrated_condition(const Mat4& a);

}  // namespace lisim
