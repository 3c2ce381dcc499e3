#include "stwave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "stwave/errors.hpp"

namespace stwave {

int TriMesh::num_boundary_edges() const {
  int count = 0;
  for (auto f : boundary_edge_flags) count += f ? 1 : 0;
  return count;
}

double TriMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const Vec2& a = vertices[tri[0]];
  const Vec2& b = vertices[tri[1]];
  const Vec2& c = vertices[tri[2]];
  return 0.5 * cross2(b - a, c - a);
}

int TriMesh::locate(const Vec2& p) const {
  const double hx = rect.width() / n_per_side;
  const double hy = rect.height() / n_per_side;
  const double eps = 1e-12 * std::max(rect.width(), rect.height());
  if (p.x() < rect.ax - eps || p.x() > rect.bx + eps || p.y() < rect.ay - eps ||
      p.y() > rect.by + eps) {
    throw std::out_of_range("TriMesh::locate: point outside domain");
  }
  int i = static_cast<int>(std::floor((p.x() - rect.ax) / hx));
  int j = static_cast<int>(std::floor((p.y() - rect.ay) / hy));
  i = std::clamp(i, 0, n_per_side - 1);
  j = std::clamp(j, 0, n_per_side - 1);
  // Local coordinates in the cell decide the half relative to the ll->ur diagonal.
  const double xi = (p.x() - rect.ax) / hx - i;
  const double eta = (p.y() - rect.ay) / hy - j;
  const int cell = 2 * (j * n_per_side + i);
  return eta <= xi ? cell : cell + 1;
}

TriMesh build_structured_mesh(const Rect& rect, int n_per_side) {
  if (n_per_side < 1) throw std::invalid_argument("build_structured_mesh: n_per_side must be >= 1");
  if (!(rect.width() > 0.0) || !(rect.height() > 0.0)) {
    throw std::invalid_argument("build_structured_mesh: degenerate rectangle");
  }
  if (n_per_side > 20000) throw CapacityError("build_structured_mesh: element count overflow");

  TriMesh mesh;
  mesh.rect = rect;
  mesh.n_per_side = n_per_side;
  const int n = n_per_side;
  const double hx = rect.width() / n;
  const double hy = rect.height() / n;

  mesh.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices.emplace_back(rect.ax + i * hx, rect.ay + j * hy);
    }
  }
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  mesh.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int ll = vid(i, j), lr = vid(i + 1, j), ul = vid(i, j + 1), ur = vid(i + 1, j + 1);
      mesh.triangles.push_back({ll, lr, ur});  // lower half, CCW
      mesh.triangles.push_back({ll, ur, ul});  // upper half, CCW
    }
  }

  // Global edge enumeration: lexicographically sorted (low, high) vertex pairs.
  std::map<std::array<int, 2>, int> edge_ids;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      edge_ids.emplace(std::array<int, 2>{a, b}, 0);
    }
  }
  int next = 0;
  for (auto& [key, id] : edge_ids) id = next++;
  mesh.edges.resize(edge_ids.size());
  for (const auto& [key, id] : edge_ids) mesh.edges[id] = key;

  mesh.triangle_edges.resize(mesh.triangles.size());
  mesh.triangle_edge_signs.resize(mesh.triangles.size());
  std::vector<int> adjacent_count(mesh.edges.size(), 0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      const int e = edge_ids.at(key);
      mesh.triangle_edges[t][k] = e;
      mesh.triangle_edge_signs[t][k] = (a < b) ? 1 : -1;
      ++adjacent_count[e];
    }
  }

  mesh.boundary_edge_flags.resize(mesh.edges.size());
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    mesh.boundary_edge_flags[e] = adjacent_count[e] == 1 ? 1 : 0;
  }
  return mesh;
}

TriMesh uniform_refine(const Rect& rect, int n0, int level) {
  if (level < 0) throw std::invalid_argument("uniform_refine: level must be >= 0");
  if (level > 30 || n0 > (1 << (30 - level))) {
    throw CapacityError("uniform_refine: element count overflow");
  }
  return build_structured_mesh(rect, n0 << level);
}

MeshMetrics mesh_metrics(const TriMesh& mesh) {
  MeshMetrics m;
  m.h_min = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = mesh.triangle_area(t);
    if (!(area > 0.0)) throw std::invalid_argument("mesh_metrics: non-positive triangle area");
    const double h = std::sqrt(area);
    m.h_max = std::max(m.h_max, h);
    m.h_min = std::min(m.h_min, h);

    const auto& tri = mesh.triangles[t];
    const Vec2& a = mesh.vertices[tri[0]];
    const Vec2& b = mesh.vertices[tri[1]];
    const Vec2& c = mesh.vertices[tri[2]];
    const double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
    const double diameter = std::max({la, lb, lc});
    const double inradius = 2.0 * area / (la + lb + lc);
    m.shape_constant_cF = std::max(m.shape_constant_cF, diameter / inradius);
  }
  m.quasi_uniformity = m.h_max / m.h_min;
  return m;
}

void dump_mesh(const TriMesh& mesh, std::ostream& out) {
  for (const auto& v : mesh.vertices) out << "v " << v.x() << " " << v.y() << "\n";
  for (const auto& t : mesh.triangles) out << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    out << "e " << mesh.edges[e][0] << " " << mesh.edges[e][1] << " "
        << int(mesh.boundary_edge_flags[e]) << "\n";
  }
}

}  // namespace stwave
