#include "stwave/spatial_fem.hpp"

#include <cmath>
#include <stdexcept>

#include "stwave/quadrature.hpp"

namespace stwave {

EdgeDofMap EdgeDofMap::interior(const TriMesh& mesh) {
  EdgeDofMap map;
  map.free_of_edge.assign(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.boundary_edge_flags[e]) {
      map.free_of_edge[e] = map.n_free++;
      map.edge_of_free.push_back(e);
    }
  }
  return map;
}

WhitneyTriangle WhitneyTriangle::from_vertices(const Vec2& p0, const Vec2& p1, const Vec2& p2,
                                               const int signs[3]) {
  WhitneyTriangle w;
  w.vertex[0] = p0;
  w.vertex[1] = p1;
  w.vertex[2] = p2;
  w.area = 0.5 * cross2(p1 - p0, p2 - p0);
  if (!(w.area > 0.0)) {
    throw std::invalid_argument("WhitneyTriangle: degenerate or negatively oriented triangle");
  }
  const double inv2a = 1.0 / (2.0 * w.area);
  w.grad[0] = perp(p2 - p1) * inv2a;
  w.grad[1] = perp(p0 - p2) * inv2a;
  w.grad[2] = perp(p1 - p0) * inv2a;
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    w.sign[k] = signs[k];
    w.curl[k] = 2.0 * signs[k] * cross2(w.grad[a], w.grad[b]);
  }
  return w;
}

WhitneyTriangle WhitneyTriangle::from(const TriMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  return from_vertices(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]],
                       mesh.triangle_edge_signs[t].data());
}

Vec2 WhitneyTriangle::point(const double bary[3]) const {
  return bary[0] * vertex[0] + bary[1] * vertex[1] + bary[2] * vertex[2];
}

void WhitneyTriangle::values(const double bary[3], Vec2 out[3]) const {
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    out[k] = sign[k] * (bary[a] * grad[b] - bary[b] * grad[a]);
  }
}

RtTriangle RtTriangle::from(const TriMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  RtTriangle r;
  for (int k = 0; k < 3; ++k) r.vertex[k] = mesh.vertices[tri[k]];
  r.area = 0.5 * cross2(r.vertex[1] - r.vertex[0], r.vertex[2] - r.vertex[0]);
  if (!(r.area > 0.0)) throw std::invalid_argument("RtTriangle: degenerate triangle");
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    r.edge_length[k] = (r.vertex[b] - r.vertex[a]).norm();
    r.sign[k] = mesh.triangle_edge_signs[t][k];
  }
  return r;
}

Vec2 RtTriangle::point(const double bary[3]) const {
  return bary[0] * vertex[0] + bary[1] * vertex[1] + bary[2] * vertex[2];
}

void RtTriangle::values(const double bary[3], Vec2 out[3]) const {
  const Vec2 x = point(bary);
  for (int k = 0; k < 3; ++k) {
    out[k] = sign[k] * (edge_length[k] / (2.0 * area)) * (x - vertex[k]);
  }
}

ElementMatrices nedelec_element_matrices(const WhitneyTriangle& tri, const MaterialModel& material,
                                         int quad_degree) {
  ElementMatrices m;
  m.curl_curl.setZero();
  m.eps_mass.setZero();
  m.sigma_mass.setZero();

  const auto rule = triangle_rule(quad_degree);
  Vec2 w[3];
  for (const auto& qp : rule) {
    const double bary[3] = {qp.l0, qp.l1, qp.l2};
    const Vec2 x = tri.point(bary);
    tri.values(bary, w);
    const double dx = qp.w * tri.area;
    const double mu_inv = material.mu_inverse(x);
    const Mat2 eps = material.epsilon(x);
    const Mat2 sig = material.sigma_is_zero() ? Mat2(Mat2::Zero()) : material.sigma(x);
    for (int i = 0; i < 3; ++i) {
      const Vec2 eps_wi = eps * w[i];
      const Vec2 sig_wi = sig * w[i];
      for (int j = 0; j < 3; ++j) {
        m.curl_curl(i, j) += mu_inv * tri.curl[i] * tri.curl[j] * dx;
        m.eps_mass(i, j) += eps_wi.dot(w[j]) * dx;
        m.sigma_mass(i, j) += sig_wi.dot(w[j]) * dx;
      }
    }
  }
  return m;
}

SpatialMatrices assemble_spatial(const TriMesh& mesh, const MaterialModel& material,
                                 const EdgeDofMap& dofmap, int quad_degree) {
  if (static_cast<int>(dofmap.free_of_edge.size()) != mesh.num_edges()) {
    throw DimensionError("assemble_spatial: dofmap does not match mesh");
  }
  std::vector<Triplet> t_axx, t_mx, t_ms;
  t_axx.reserve(9 * mesh.num_triangles());
  t_mx.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const WhitneyTriangle tri = WhitneyTriangle::from(mesh, t);
    const ElementMatrices local = nedelec_element_matrices(tri, material, quad_degree);
    for (int i = 0; i < 3; ++i) {
      const int gi = dofmap.free_of_edge[mesh.triangle_edges[t][i]];
      if (gi < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int gj = dofmap.free_of_edge[mesh.triangle_edges[t][j]];
        if (gj < 0) continue;
        t_axx.push_back({gi, gj, local.curl_curl(i, j)});
        t_mx.push_back({gi, gj, local.eps_mass(i, j)});
        if (local.sigma_mass(i, j) != 0.0) t_ms.push_back({gi, gj, local.sigma_mass(i, j)});
      }
    }
  }
  SpatialMatrices s;
  s.n = dofmap.n_free;
  s.A_xx = CsrMatrix::from_triplets(s.n, s.n, std::move(t_axx));
  s.M_x = CsrMatrix::from_triplets(s.n, s.n, std::move(t_mx));
  s.M_x_sigma = CsrMatrix::from_triplets(s.n, s.n, std::move(t_ms));
  return s;
}

Eigen::Matrix3d rt_element_matrix(const RtTriangle& tri) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Vec2 v[3];
  for (const auto& qp : triangle_rule(2)) {
    const double bary[3] = {qp.l0, qp.l1, qp.l2};
    tri.values(bary, v);
    const double dx = qp.w * tri.area;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m(i, j) += v[i].dot(v[j]) * dx;
    }
  }
  return m;
}

CsrMatrix assemble_rt_mass(const TriMesh& mesh) {
  std::vector<Triplet> trip;
  trip.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const RtTriangle tri = RtTriangle::from(mesh, t);
    const Eigen::Matrix3d local = rt_element_matrix(tri);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        trip.push_back({mesh.triangle_edges[t][i], mesh.triangle_edges[t][j], local(i, j)});
      }
    }
  }
  return CsrMatrix::from_triplets(mesh.num_edges(), mesh.num_edges(), std::move(trip));
}

CsrMatrix assemble_nedelec_rt_mixed(const TriMesh& mesh, const EdgeDofMap& dofmap) {
  std::vector<Triplet> trip;
  trip.reserve(9 * mesh.num_triangles());
  Vec2 w[3], v[3];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const WhitneyTriangle wt = WhitneyTriangle::from(mesh, t);
    const RtTriangle rt = RtTriangle::from(mesh, t);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (const auto& qp : triangle_rule(2)) {
      const double bary[3] = {qp.l0, qp.l1, qp.l2};
      wt.values(bary, w);
      rt.values(bary, v);
      const double dx = qp.w * wt.area;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) local(i, j) += w[i].dot(v[j]) * dx;
      }
    }
    for (int i = 0; i < 3; ++i) {
      const int gi = dofmap.free_of_edge[mesh.triangle_edges[t][i]];
      if (gi < 0) continue;
      for (int j = 0; j < 3; ++j) {
        trip.push_back({gi, mesh.triangle_edges[t][j], local(i, j)});
      }
    }
  }
  return CsrMatrix::from_triplets(dofmap.n_free, mesh.num_edges(), std::move(trip));
}

Eigen::VectorXd nedelec_interpolate(const TriMesh& mesh,
                                    const std::function<Vec2(const Vec2&)>& field) {
  Eigen::VectorXd coef(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Vec2& lo = mesh.vertices[mesh.edges[e][0]];
    const Vec2& hi = mesh.vertices[mesh.edges[e][1]];
    coef[e] = field(0.5 * (lo + hi)).dot(hi - lo);
  }
  return coef;
}

}  // namespace stwave
