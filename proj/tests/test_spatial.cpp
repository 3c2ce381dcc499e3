#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "stwave/spatial_fem.hpp"

using namespace stwave;

namespace {

// Exact integration of polynomials over the unit reference triangle via
// int x^a y^b = a! b! / (a+b+2)!. Everything the lowest-order elements
// produce on that triangle has small integer coefficients.
struct Frac {
  long long n = 0, d = 1;
  Frac() = default;
  Frac(long long num, long long den = 1) : n(num), d(den) { normalize(); }
  void normalize() {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
  }
  Frac operator+(const Frac& o) const { return Frac(n * o.d + o.n * d, d * o.d); }
  Frac operator-(const Frac& o) const { return Frac(n * o.d - o.n * d, d * o.d); }
  Frac operator*(const Frac& o) const { return Frac(n * o.n, d * o.d); }
  double value() const { return double(n) / double(d); }
};

// Bivariate polynomial with rational coefficients, powers < 4.
struct Poly2 {
  Frac c[4][4];
  Poly2 operator*(const Poly2& o) const {
    Poly2 r;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int p = 0; a + p < 4; ++p)
          for (int q = 0; b + q < 4; ++q) r.c[a + p][b + q] = r.c[a + p][b + q] + c[a][b] * o.c[p][q];
    return r;
  }
  Poly2 operator+(const Poly2& o) const {
    Poly2 r;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) r.c[a][b] = c[a][b] + o.c[a][b];
    return r;
  }
  Poly2 operator-(const Poly2& o) const {
    Poly2 r;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) r.c[a][b] = c[a][b] - o.c[a][b];
    return r;
  }
};

long long factorial(int k) { return k <= 1 ? 1 : k * factorial(k - 1); }

Frac integrate_reference(const Poly2& p) {
  Frac acc(0);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      acc = acc + p.c[a][b] * Frac(factorial(a) * factorial(b), factorial(a + b + 2));
    }
  }
  return acc;
}

Poly2 constant(long long v) {
  Poly2 p;
  p.c[0][0] = Frac(v);
  return p;
}

Poly2 monomial_x() {
  Poly2 p;
  p.c[1][0] = Frac(1);
  return p;
}

Poly2 monomial_y() {
  Poly2 p;
  p.c[0][1] = Frac(1);
  return p;
}

// Whitney basis on the reference triangle (0,0),(1,0),(0,1) expressed
// symbolically; signs as produced by the structured mesh convention.
struct SymbolicWhitney {
  Poly2 comp_x[3], comp_y[3];
};

SymbolicWhitney symbolic_whitney(const int signs[3]) {
  const Poly2 lambda[3] = {constant(1) - monomial_x() - monomial_y(), monomial_x(), monomial_y()};
  const long long grad[3][2] = {{-1, -1}, {1, 0}, {0, 1}};
  SymbolicWhitney w;
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    w.comp_x[k] = constant(signs[k]) * (lambda[a] * constant(grad[b][0]) - lambda[b] * constant(grad[a][0]));
    w.comp_y[k] = constant(signs[k]) * (lambda[a] * constant(grad[b][1]) - lambda[b] * constant(grad[a][1]));
  }
  return w;
}

const Rect kUnit{0, 0, 1, 1};

TriMesh relabel_vertices(const TriMesh& mesh) {
  // Geometry-preserving relabeling i -> V-1-i with freshly enumerated edges.
  TriMesh out;
  out.rect = mesh.rect;
  out.n_per_side = mesh.n_per_side;
  const int v = mesh.num_vertices();
  out.vertices.resize(v);
  for (int i = 0; i < v; ++i) out.vertices[v - 1 - i] = mesh.vertices[i];
  for (const auto& tri : mesh.triangles) {
    out.triangles.push_back({v - 1 - tri[0], v - 1 - tri[1], v - 1 - tri[2]});
  }
  std::map<std::array<int, 2>, int> ids;
  for (const auto& tri : out.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      ids.emplace(std::array<int, 2>{a, b}, 0);
    }
  }
  int next = 0;
  for (auto& [key, id] : ids) id = next++;
  out.edges.resize(ids.size());
  for (const auto& [key, id] : ids) out.edges[id] = key;
  out.triangle_edges.resize(out.triangles.size());
  out.triangle_edge_signs.resize(out.triangles.size());
  std::vector<int> count(out.edges.size(), 0);
  for (std::size_t t = 0; t < out.triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int a = out.triangles[t][(k + 1) % 3], b = out.triangles[t][(k + 2) % 3];
      const int e = ids.at({std::min(a, b), std::max(a, b)});
      out.triangle_edges[t][k] = e;
      out.triangle_edge_signs[t][k] = a < b ? 1 : -1;
      ++count[e];
    }
  }
  out.boundary_edge_flags.resize(out.edges.size());
  for (std::size_t e = 0; e < out.edges.size(); ++e) out.boundary_edge_flags[e] = count[e] == 1;
  return out;
}

}  // namespace

TEST_CASE("reference triangle curl-curl entries are +-2") {
  const int signs[3] = {1, -1, 1};
  const WhitneyTriangle tri =
      WhitneyTriangle::from_vertices(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), signs);
  const ElementMatrices m = nedelec_element_matrices(tri, MaterialModel::vacuum());
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(tri.curl[i]) == doctest::Approx(2.0).epsilon(1e-15));  // 1/|K|
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(m.curl_curl(i, j)) == doctest::Approx(2.0).epsilon(1e-14));
      CHECK(m.curl_curl(i, j) ==
            doctest::Approx(0.5 * tri.curl[i] * tri.curl[j]).epsilon(1e-14));
    }
  }
}

TEST_CASE("identity-weight mass matrix matches the symbolic Whitney integrals") {
  const int signs[3] = {1, -1, 1};
  const WhitneyTriangle tri =
      WhitneyTriangle::from_vertices(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), signs);
  const ElementMatrices m = nedelec_element_matrices(tri, MaterialModel::vacuum());
  const SymbolicWhitney w = symbolic_whitney(signs);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Frac exact =
          integrate_reference(w.comp_x[i] * w.comp_x[j] + w.comp_y[i] * w.comp_y[j]);
      CHECK(m.eps_mass(i, j) == doctest::Approx(exact.value()).epsilon(1e-14));
    }
  }
}

TEST_CASE("zero conductivity gives the zero element matrix") {
  const int signs[3] = {1, 1, 1};
  const WhitneyTriangle tri =
      WhitneyTriangle::from_vertices(Vec2(0.2, 0.1), Vec2(0.9, 0.3), Vec2(0.4, 0.8), signs);
  const ElementMatrices m = nedelec_element_matrices(tri, MaterialModel::vacuum());
  CHECK(m.sigma_mass.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(
      WhitneyTriangle::from_vertices(Vec2(0, 0), Vec2(1, 0), Vec2(2, 0), signs),
      std::invalid_argument);
}

TEST_CASE("quadrature degree 2 vs 4 changes nothing for constant materials") {
  const int signs[3] = {1, -1, -1};
  const WhitneyTriangle tri =
      WhitneyTriangle::from_vertices(Vec2(0.1, 0.0), Vec2(1.2, 0.4), Vec2(0.3, 1.1), signs);
  const MaterialModel material = MaterialModel::isotropic(2.5, 0.7);
  const ElementMatrices m2 = nedelec_element_matrices(tri, material, 2);
  const ElementMatrices m4 = nedelec_element_matrices(tri, material, 4);
  CHECK((m2.eps_mass - m4.eps_mass).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((m2.curl_curl - m4.curl_curl).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("assembled matrices on the n=2 unit square") {
  const TriMesh mesh = build_structured_mesh(kUnit, 2);
  const EdgeDofMap dofmap = EdgeDofMap::interior(mesh);
  CHECK(dofmap.n_free == 8);  // total edges minus boundary edges
  const SpatialMatrices s = assemble_spatial(mesh, MaterialModel::vacuum(), dofmap);
  CHECK(s.A_xx.rows() == 8);
  CHECK(s.M_x_sigma.nnz() == 0);

  SUBCASE("M_x is symmetric positive definite") {
    const Eigen::MatrixXd mx = s.M_x.to_dense();
    CHECK((mx - mx.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mx);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
  SUBCASE("A_xx is symmetric positive semidefinite with a gradient kernel") {
    const Eigen::MatrixXd axx = s.A_xx.to_dense();
    CHECK((axx - axx.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(axx);
    CHECK(eig.eigenvalues().minCoeff() > -1e-13);
    CHECK(eig.eigenvalues().minCoeff() < 1e-13);  // nontrivial kernel
  }
}

TEST_CASE("discrete gradients of interior hat functions span the curl-curl kernel") {
  for (int n : {2, 4}) {
    const TriMesh mesh = build_structured_mesh(kUnit, n);
    const EdgeDofMap dofmap = EdgeDofMap::interior(mesh);
    const SpatialMatrices s = assemble_spatial(mesh, MaterialModel::vacuum(), dofmap);
    // Interior vertices are those not on the rectangle boundary.
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      const Vec2& p = mesh.vertices[v];
      if (p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0) continue;
      Eigen::VectorXd g = Eigen::VectorXd::Zero(dofmap.n_free);
      for (int e = 0; e < mesh.num_edges(); ++e) {
        const int k = dofmap.free_of_edge[e];
        if (k < 0) continue;
        double value = 0.0;
        if (mesh.edges[e][1] == v) value += 1.0;  // hat value at the high end
        if (mesh.edges[e][0] == v) value -= 1.0;  // minus value at the low end
        g[k] = value;
      }
      CHECK(matvec(s.A_xx, g).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("patch test: interpolated constants are reproduced at barycenters") {
  const TriMesh mesh = build_structured_mesh(kUnit, 3);
  const Vec2 c(0.7, -1.3);
  const Eigen::VectorXd coef = nedelec_interpolate(mesh, [&](const Vec2&) { return c; });
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const WhitneyTriangle tri = WhitneyTriangle::from(mesh, t);
    const double bary[3] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    Vec2 w[3];
    tri.values(bary, w);
    Vec2 value = Vec2::Zero();
    for (int k = 0; k < 3; ++k) value += coef[mesh.triangle_edges[t][k]] * w[k];
    CHECK((value - c).norm() < 1e-12);
  }
}

TEST_CASE("vertex relabeling yields the same matrices up to the signed DOF permutation") {
  const TriMesh mesh = build_structured_mesh(kUnit, 2);
  const TriMesh relabeled = relabel_vertices(mesh);
  const EdgeDofMap dof_a = EdgeDofMap::interior(mesh);
  const EdgeDofMap dof_b = EdgeDofMap::interior(relabeled);
  const MaterialModel material = MaterialModel::with_diamond_sigma(1.0, 0.5, 0.5, 0.4);
  const SpatialMatrices sa = assemble_spatial(mesh, material, dof_a);
  const SpatialMatrices sb = assemble_spatial(relabeled, material, dof_b);

  const int v = mesh.num_vertices();
  // Map each old edge to (new edge id, orientation flip).
  std::map<std::array<int, 2>, int> new_ids;
  for (int e = 0; e < relabeled.num_edges(); ++e) {
    new_ids[{relabeled.edges[e][0], relabeled.edges[e][1]}] = e;
  }
  std::vector<int> perm(mesh.num_edges());
  std::vector<double> flip(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int a = v - 1 - mesh.edges[e][0], b = v - 1 - mesh.edges[e][1];
    perm[e] = new_ids.at({std::min(a, b), std::max(a, b)});
    flip[e] = a < b ? 1.0 : -1.0;
  }
  const Eigen::MatrixXd ma = sa.M_x.to_dense(), mb = sb.M_x.to_dense();
  const Eigen::MatrixXd aa = sa.A_xx.to_dense(), ab = sb.A_xx.to_dense();
  const Eigen::MatrixXd ga = sa.M_x_sigma.to_dense(), gb = sb.M_x_sigma.to_dense();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int i = dof_a.free_of_edge[e];
    if (i < 0) continue;
    for (int f = 0; f < mesh.num_edges(); ++f) {
      const int j = dof_a.free_of_edge[f];
      if (j < 0) continue;
      const int pi = dof_b.free_of_edge[perm[e]];
      const int pj = dof_b.free_of_edge[perm[f]];
      REQUIRE(pi >= 0);
      REQUIRE(pj >= 0);
      const double s = flip[e] * flip[f];
      CHECK(ma(i, j) == doctest::Approx(s * mb(pi, pj)).epsilon(1e-13));
      CHECK(aa(i, j) == doctest::Approx(s * ab(pi, pj)).epsilon(1e-13));
      CHECK(ga(i, j) == doctest::Approx(s * gb(pi, pj)).epsilon(1e-13));
    }
  }
}

namespace {

// Closed-form oracle: with phi_i = s_i |e_i|/(2A) (x - p_i) and
// x - p_i = sum_k lambda_k (p_k - p_i), the identity
// int_K lambda_k lambda_l = A (1 + delta_kl) / 12 integrates the product
// exactly without any quadrature rule.
Eigen::Matrix3d rt_mass_symbolic(const RtTriangle& rt) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const double moment = rt.area * (k == l ? 2.0 : 1.0) / 12.0;
          acc += moment * (rt.vertex[k] - rt.vertex[i]).dot(rt.vertex[l] - rt.vertex[j]);
        }
      }
      m(i, j) = rt.sign[i] * rt.sign[j] * rt.edge_length[i] * rt.edge_length[j] /
                (4.0 * rt.area * rt.area) * acc;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("RT element matrix matches the symbolic oracle") {
  SUBCASE("structured mesh triangle") {
    const TriMesh mesh = build_structured_mesh(kUnit, 1);
    const RtTriangle rt = RtTriangle::from(mesh, 0);
    CHECK((rt_element_matrix(rt) - rt_mass_symbolic(rt)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("skewed triangle") {
    TriMesh mesh = build_structured_mesh(kUnit, 1);
    mesh.vertices[3] = Vec2(1.7, 1.2);  // distort while keeping positive orientation
    const RtTriangle rt = RtTriangle::from(mesh, 0);
    CHECK((rt_element_matrix(rt) - rt_mass_symbolic(rt)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("RT mass scales with the square of the geometry factor") {
  const int signs[3] = {1, -1, 1};
  auto make = [&](double s) {
    TriMesh mesh = build_structured_mesh(Rect{0, 0, s, s}, 1);
    return rt_element_matrix(RtTriangle::from(mesh, 0));
  };
  const Eigen::Matrix3d m1 = make(1.0);
  const Eigen::Matrix3d m3 = make(3.0);
  CHECK((m3 - 9.0 * m1).cwiseAbs().maxCoeff() < 1e-12);
  (void)signs;
}

TEST_CASE("assembled RT mass is SPD over all edges") {
  const TriMesh mesh = build_structured_mesh(kUnit, 1);
  const CsrMatrix m = assemble_rt_mass(mesh);
  CHECK(m.rows() == 5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.to_dense());
  CHECK(eig.eigenvalues().minCoeff() > 0.0);

  SUBCASE("entries vanish for edge pairs sharing no triangle") {
    const TriMesh fine = build_structured_mesh(kUnit, 3);
    const CsrMatrix mf = assemble_rt_mass(fine);
    std::vector<std::vector<int>> tris_of_edge(fine.num_edges());
    for (int t = 0; t < fine.num_triangles(); ++t) {
      for (int k = 0; k < 3; ++k) tris_of_edge[fine.triangle_edges[t][k]].push_back(t);
    }
    for (int e = 0; e < fine.num_edges(); ++e) {
      for (int f = 0; f < fine.num_edges(); ++f) {
        bool share = false;
        for (int te : tris_of_edge[e]) {
          for (int tf : tris_of_edge[f]) share |= te == tf;
        }
        if (!share) CHECK(mf.coeff(e, f) == 0.0);
      }
    }
  }

  SUBCASE("Gram property on random vectors") {
    const TriMesh fine = build_structured_mesh(kUnit, 4);
    const CsrMatrix mf = assemble_rt_mass(fine);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
      Eigen::VectorXd x(mf.rows());
      for (int i = 0; i < x.size(); ++i) x[i] = unit(rng);
      if (x.norm() == 0.0) continue;
      CHECK(x.dot(matvec(mf, x)) > 0.0);
    }
  }
}
