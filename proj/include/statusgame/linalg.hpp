#pragma once

#include <array>
#include <cmath>

#include "statusgame/errors.hpp"

namespace statusgame {

using Vec3 = std::array<double, 3>;
using Matrix3 = std::array<Vec3, 3>;

inline double det3(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Cramer solve of m x = b; throws SingularJacobianError when |det| <= tol.
inline Vec3 solve3(const Matrix3& m, const Vec3& b, double tol = 1e-14) {
  const double d = det3(m);
  if (std::abs(d) <= tol) {
    throw SingularJacobianError("3x3 system is singular (det=" +
                                std::to_string(d) + ")");
  }
  Vec3 x{};
  for (int col = 0; col < 3; ++col) {
    Matrix3 mc = m;
    for (int row = 0; row < 3; ++row) mc[row][col] = b[row];
    x[col] = det3(mc) / d;
  }
  return x;
}

}  // namespace statusgame
