#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "stwave/errors.hpp"
#include "stwave/mesh.hpp"

using namespace stwave;

namespace {
const Rect kUnit{0, 0, 1, 1};
}

TEST_CASE("structured mesh counts for n=2") {
  const TriMesh mesh = build_structured_mesh(kUnit, 2);
  CHECK(mesh.num_vertices() == 9);
  CHECK(mesh.num_triangles() == 8);
  CHECK(mesh.num_edges() == 16);
  CHECK(mesh.num_boundary_edges() == 8);
  // Euler relation V - E + F = 1 for the simply connected mesh.
  CHECK(mesh.num_vertices() - mesh.num_edges() + mesh.num_triangles() == 1);
}

TEST_CASE("minimal split of a square") {
  const TriMesh mesh = build_structured_mesh(kUnit, 1);
  CHECK(mesh.num_vertices() == 4);
  CHECK(mesh.num_triangles() == 2);
  CHECK(mesh.num_edges() == 5);
  CHECK(mesh.num_boundary_edges() == 4);
}

TEST_CASE("all triangles positively oriented, areas sum to the rectangle") {
  const Rect rect{-1.0, 0.5, 2.0, 3.5};
  for (int n : {1, 3, 7}) {
    const TriMesh mesh = build_structured_mesh(rect, n);
    double total = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const double a = mesh.triangle_area(t);
      CHECK(a > 0.0);
      total += a;
    }
    CHECK(total == doctest::Approx(rect.width() * rect.height()).epsilon(1e-12));
    CHECK(mesh.num_vertices() - mesh.num_edges() + mesh.num_triangles() == 1);
  }
}

TEST_CASE("interior edges are shared by exactly two triangles with opposite signs") {
  const TriMesh mesh = build_structured_mesh(kUnit, 4);
  std::vector<int> sign_sum(mesh.num_edges(), 0);
  std::vector<int> count(mesh.num_edges(), 0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      sign_sum[mesh.triangle_edges[t][k]] += mesh.triangle_edge_signs[t][k];
      count[mesh.triangle_edges[t][k]] += 1;
    }
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.boundary_edge_flags[e]) {
      CHECK(count[e] == 1);
    } else {
      CHECK(count[e] == 2);
      CHECK(sign_sum[e] == 0);
    }
  }
}

TEST_CASE("global edge direction runs from the smaller to the larger vertex index") {
  const TriMesh mesh = build_structured_mesh(kUnit, 3);
  for (const auto& e : mesh.edges) CHECK(e[0] < e[1]);
}

TEST_CASE("metrics of the structured unit-square mesh") {
  SUBCASE("n=4 h_max") {
    const MeshMetrics m = mesh_metrics(build_structured_mesh(kUnit, 4));
    CHECK(m.h_max == doctest::Approx(std::sqrt(1.0 / 32.0)).epsilon(1e-14));
    CHECK(m.quasi_uniformity == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("n=8 h_max matches sqrt(1/128)") {
    const MeshMetrics m = mesh_metrics(build_structured_mesh(kUnit, 8));
    CHECK(m.h_max == doctest::Approx(0.0884).epsilon(2e-3));
  }
  SUBCASE("shape constant of the right isosceles triangle") {
    // inradius r = (a + b - c)/2 for right triangles; c_F = sqrt(2)/(1 - 1/sqrt(2)).
    const MeshMetrics m = mesh_metrics(build_structured_mesh(kUnit, 2));
    const double expected = std::sqrt(2.0) / (1.0 - 1.0 / std::sqrt(2.0));
    CHECK(m.shape_constant_cF == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("uniform refinement quadruples triangles and halves h_max") {
  MeshMetrics prev = mesh_metrics(uniform_refine(kUnit, 2, 0));
  int prev_triangles = uniform_refine(kUnit, 2, 0).num_triangles();
  for (int level = 1; level <= 3; ++level) {
    const TriMesh mesh = uniform_refine(kUnit, 2, level);
    const MeshMetrics m = mesh_metrics(mesh);
    CHECK(mesh.num_triangles() == 4 * prev_triangles);
    CHECK(m.h_max == doctest::Approx(prev.h_max / 2.0).epsilon(1e-13));
    prev = m;
    prev_triangles = mesh.num_triangles();
  }
}

TEST_CASE("refinement level examples") {
  CHECK(uniform_refine(kUnit, 2, 1).n_per_side == 4);
  CHECK(mesh_metrics(uniform_refine(kUnit, 2, 1)).h_max == doctest::Approx(0.1768).epsilon(1e-3));
  CHECK(mesh_metrics(uniform_refine(kUnit, 4, 2)).h_max == doctest::Approx(0.0442).epsilon(1e-3));
  const MeshMetrics direct = mesh_metrics(build_structured_mesh(kUnit, 2));
  const MeshMetrics refined = mesh_metrics(uniform_refine(kUnit, 2, 0));
  CHECK(direct.h_max == refined.h_max);
  CHECK(direct.shape_constant_cF == refined.shape_constant_cF);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(build_structured_mesh(kUnit, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_structured_mesh(Rect{0, 0, 0, 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(uniform_refine(kUnit, 2, -1), std::invalid_argument);
  CHECK_THROWS_AS(uniform_refine(kUnit, 1024, 25), CapacityError);
}

TEST_CASE("point location matches containing triangle") {
  const TriMesh mesh = build_structured_mesh(kUnit, 3);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    Vec2 centroid = Vec2::Zero();
    for (int v : mesh.triangles[t]) centroid += mesh.vertices[v];
    centroid /= 3.0;
    CHECK(mesh.locate(centroid) == t);
  }
  CHECK_THROWS_AS(mesh.locate(Vec2(2.0, 0.5)), std::out_of_range);
}

TEST_CASE("mesh dump format") {
  const TriMesh mesh = build_structured_mesh(kUnit, 1);
  std::ostringstream out;
  dump_mesh(mesh, out);
  std::istringstream in(out.str());
  std::string tag;
  int v = 0, t = 0, e = 0;
  while (in >> tag) {
    std::string rest;
    std::getline(in, rest);
    if (tag == "v") ++v;
    if (tag == "t") ++t;
    if (tag == "e") ++e;
  }
  CHECK(v == 4);
  CHECK(t == 2);
  CHECK(e == 5);
}
