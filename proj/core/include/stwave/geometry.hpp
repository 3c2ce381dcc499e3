#pragma once

#include <Eigen/Core>

namespace stwave {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Scalar 2D cross product a_x b_y - a_y b_x.
inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Rotate by +90 degrees: (x,y) -> (-y,x).
inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

}  // namespace stwave
