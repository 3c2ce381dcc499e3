#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stwave/geometry.hpp"

namespace stwave {

/// Axis-aligned rectangle [ax,bx] x [ay,by].
struct Rect {
  double ax = 0.0, ay = 0.0, bx = 1.0, by = 1.0;
  double width() const { return bx - ax; }
  double height() const { return by - ay; }
};

/// Structured triangulation of a rectangle. Every grid cell is split along the
/// diagonal from its lower-left to its upper-right corner, so all elements are
/// congruent right triangles. Edges carry a global orientation from the lower
/// to the higher vertex index; `triangle_edge_signs` records whether the local
/// edge (opposite-vertex convention: local edge k connects vertices k+1, k+2
/// mod 3) runs with (+1) or against (-1) that global direction.
struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;        // CCW vertex indices
  std::vector<std::array<int, 2>> edges;            // (low, high) vertex indices
  std::vector<std::array<int, 3>> triangle_edges;   // edge ids, local edge k opposite vertex k
  std::vector<std::array<int, 3>> triangle_edge_signs;
  std::vector<std::uint8_t> boundary_edge_flags;

  Rect rect;
  int n_per_side = 0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_boundary_edges() const;

  double triangle_area(int t) const;
  /// Index of the triangle containing p (ties resolved deterministically).
  /// Throws std::out_of_range for points outside the rectangle.
  int locate(const Vec2& p) const;
};

struct MeshMetrics {
  double h_max = 0.0;           // max over elements of area^(1/2)
  double h_min = 0.0;
  double quasi_uniformity = 1.0;  // h_max / h_min
  double shape_constant_cF = 0.0;  // max over elements of diameter / inradius
};

/// n x n cells, each split into two triangles: (n+1)^2 vertices, 2n^2 triangles.
TriMesh build_structured_mesh(const Rect& rect, int n_per_side);

/// build_structured_mesh with n = n0 * 2^level; halves h_max per level.
TriMesh uniform_refine(const Rect& rect, int n0, int level);

MeshMetrics mesh_metrics(const TriMesh& mesh);

/// Plain-text dump: "v x y" / "t i j k" / "e i j b" lines.
void dump_mesh(const TriMesh& mesh, std::ostream& out);

}  // namespace stwave
