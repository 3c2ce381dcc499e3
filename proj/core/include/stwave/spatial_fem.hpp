#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "stwave/linalg.hpp"
#include "stwave/material.hpp"
#include "stwave/mesh.hpp"

namespace stwave {

/// Maps global edge ids to the free Nedelec DOFs (interior edges); boundary
/// edges carry the homogeneous tangential-trace condition and are eliminated.
struct EdgeDofMap {
  std::vector<int> free_of_edge;  // -1 for boundary edges
  std::vector<int> edge_of_free;
  int n_free = 0;

  static EdgeDofMap interior(const TriMesh& mesh);
};

/// Whitney edge basis of one triangle in the global edge orientation.
/// Local edge k sits opposite vertex k; curls are elementwise constant.
struct WhitneyTriangle {
  Vec2 vertex[3];
  Vec2 grad[3];     // barycentric gradients
  double curl[3];   // curl of each oriented basis function
  int sign[3];
  double area;

  static WhitneyTriangle from(const TriMesh& mesh, int t);
  static WhitneyTriangle from_vertices(const Vec2& p0, const Vec2& p1, const Vec2& p2,
                                       const int signs[3]);

  Vec2 point(const double bary[3]) const;
  void values(const double bary[3], Vec2 out[3]) const;
};

/// Lowest-order Raviart-Thomas basis of one triangle, oriented by the global
/// edge normals; normalized so that the normal component on the own edge is 1.
struct RtTriangle {
  Vec2 vertex[3];
  double edge_length[3];
  int sign[3];
  double area;

  static RtTriangle from(const TriMesh& mesh, int t);
  Vec2 point(const double bary[3]) const;
  void values(const double bary[3], Vec2 out[3]) const;
};

struct ElementMatrices {
  Eigen::Matrix3d curl_curl, eps_mass, sigma_mass;
};

/// Element matrices in local edge order (exact for affine elements and the
/// default degree-2 rule when the material data is elementwise constant).
ElementMatrices nedelec_element_matrices(const WhitneyTriangle& tri, const MaterialModel& material,
                                         int quad_degree = 2);

struct SpatialMatrices {
  CsrMatrix A_xx;       // (mu^-1 curl psi_k, curl psi_l)
  CsrMatrix M_x;        // (eps psi_k, psi_l)
  CsrMatrix M_x_sigma;  // (sigma psi_k, psi_l)
  int n = 0;
};

SpatialMatrices assemble_spatial(const TriMesh& mesh, const MaterialModel& material,
                                 const EdgeDofMap& dofmap, int quad_degree = 2);

Eigen::Matrix3d rt_element_matrix(const RtTriangle& tri);

/// RT0 mass over ALL edges; no boundary elimination (normal traces are
/// unconstrained in the source projection space).
CsrMatrix assemble_rt_mass(const TriMesh& mesh);

/// Mixed mass (psi_l^N, phi_r^RT), free Nedelec rows x all RT columns.
CsrMatrix assemble_nedelec_rt_mixed(const TriMesh& mesh, const EdgeDofMap& dofmap);

/// Edge-midpoint tangential interpolation: coefficient = f(mid) . (p_hi - p_lo).
Eigen::VectorXd nedelec_interpolate(const TriMesh& mesh,
                                    const std::function<Vec2(const Vec2&)>& field);

}  // namespace stwave
