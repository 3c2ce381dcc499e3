#pragma once

#include <span>

namespace stwave {

/// Quadrature node on the reference triangle in barycentric coordinates.
/// Weights sum to 1; multiply by the physical element area when integrating.
struct TrianglePoint {
  double l0, l1, l2, w;
};

/// Symmetric rule exact for polynomials up to `degree` (supported: 1,2,4,6,8).
/// Asking for an intermediate degree returns the next rule that covers it.
std::span<const TrianglePoint> triangle_rule(int degree);

/// Gauss-Legendre node on [0,1]; weights sum to 1.
struct GaussPoint {
  double x, w;
};

/// n-point Gauss-Legendre rule on [0,1], exact up to degree 2n-1 (n = 1..6).
std::span<const GaussPoint> gauss_rule(int n_points);

/// Smallest point count whose Gauss rule integrates `degree` exactly.
int gauss_points_for_degree(int degree);

}  // namespace stwave
