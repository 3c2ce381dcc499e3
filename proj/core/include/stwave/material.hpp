#pragma once

#include <cmath>
#include <functional>

#include "stwave/geometry.hpp"

namespace stwave {

/// Pointwise material data: symmetric positive-definite permittivity tensor,
/// positive scalar inverse permeability, positive-semidefinite conductivity
/// tensor with compact support. A null sigma means identically zero and lets
/// the assembly drop the damping term altogether.
struct MaterialModel {
  std::function<Mat2(const Vec2&)> epsilon;
  std::function<double(const Vec2&)> mu_inverse;
  std::function<Mat2(const Vec2&)> sigma;

  bool sigma_is_zero() const { return !sigma; }

  static MaterialModel vacuum() { return isotropic(1.0, 1.0); }

  static MaterialModel isotropic(double eps, double mu_inv) {
    MaterialModel m;
    m.epsilon = [eps](const Vec2&) { return Mat2(eps * Mat2::Identity()); };
    m.mu_inverse = [mu_inv](const Vec2&) { return mu_inv; };
    return m;
  }

  /// Conductivity `value` on the diamond |x1-cx| + |x2-cy| <= r, zero outside.
  static MaterialModel with_diamond_sigma(double value = 1.0, double cx = 0.5, double cy = 0.5,
                                          double r = 0.15) {
    MaterialModel m = vacuum();
    m.sigma = [=](const Vec2& x) {
      const bool inside = std::abs(x.x() - cx) + std::abs(x.y() - cy) <= r;
      return Mat2(inside ? value * Mat2::Identity() : Mat2::Zero());
    };
    return m;
  }
};

}  // namespace stwave
