#pragma once

#include <functional>

#include <Eigen/Core>

#include "stwave/linalg.hpp"
#include "stwave/material.hpp"
#include "stwave/mesh.hpp"
#include "stwave/spatial_fem.hpp"
#include "stwave/temporal_fem.hpp"

namespace stwave {

using SpaceTimeField = std::function<Vec2(double, const Vec2&)>;
using SpatialField = std::function<Vec2(const Vec2&)>;

/// Quadrature selection for the variable-coefficient integrals. The piecewise
/// polynomial couplings (projection Gram blocks, test pairings) are always
/// integrated exactly and are not configurable.
struct QuadratureConfig {
  int moment_space_degree = 4;  // source moments (j_a, phi w)
  int moment_time_points = 3;   // Gauss points per time element for the moments
  int error_space_degree = 4;   // error norms
  int error_time_points = 4;
};

struct ProblemData {
  TriMesh mesh;
  TimePartition partition;
  MaterialModel material;
  SpaceTimeField j_a;  // null means zero source
  SpatialField phi;    // initial value, null means zero
  SpatialField psi;    // initial velocity, null means zero
  QuadratureConfig quad;
};

/// Coefficients of the L2(Q) projection of the source onto
/// S^1(time) x RT^0(space): coef(m, r) multiplies hat_m(t) * phi_r^RT(x).
struct RtProjection {
  Eigen::MatrixXd coef;  // (N^t + 1) x n_edges
};

RtProjection project_rhs_rt(const SpaceTimeField& j_a, const TriMesh& mesh,
                            const TimePartition& partition, const QuadratureConfig& quad = {});

/// Load vector: (Pi j, phi_ell psi_l)_{L2(Q)} plus the weak initial-velocity
/// term carried by the test functions active at t=0.
Eigen::VectorXd assemble_rhs(const TriMesh& mesh, const EdgeDofMap& dofmap,
                             const TimePartition& partition, const RtProjection& projection,
                             const SpatialField& psi, const MaterialModel& material,
                             const QuadratureConfig& quad = {});

struct InitialLift {
  Eigen::VectorXd lift;     // length n_time * n_free
  Eigen::VectorXd a0_free;  // interpolated t=0 coefficients on free edges
  double max_boundary_moment = 0.0;
};

/// Nedelec interpolation of phi and its lift through the kappa=0 columns of
/// the temporal matrices. A tangential trace above 1e-10 on boundary edges is
/// reported (and warned about) but not fatal.
InitialLift assemble_initial_lift(const TriMesh& mesh, const EdgeDofMap& dofmap,
                                  const TimePartition& partition, const SpatialField& phi,
                                  const SpatialMatrices& spatial,
                                  const TemporalInitialColumns& initial_columns);

struct SpaceTimeSystem {
  CsrMatrix K;          // -A_tt (x) M_x [+ A_t (x) M_x_sigma] + M_t (x) A_xx
  Eigen::VectorXd rhs;  // J - A_Ini
  EdgeDofMap dofmap;
  Eigen::VectorXd a0_free;
  int n_time = 0;
  int n_space = 0;
};

SpaceTimeSystem build_system(const ProblemData& problem);

struct EvalResult {
  Vec2 value;
  Vec2 dt_value;
  double curl;
};

/// Solved coefficients in the layout of the system DOF vector (temporal index
/// outer) plus the prescribed t=0 nodal block.
struct SolutionCoefficients {
  TriMesh mesh;
  TimePartition partition;
  EdgeDofMap dofmap;
  Eigen::VectorXd x;   // kappa = 1 .. 2N blocks
  Eigen::VectorXd a0;  // prescribed kappa = 0 block (free edges)

  int n_space() const { return dofmap.n_free; }
  int n_time() const { return partition.n_dofs(); }
  /// Coefficient of temporal node kappa (0..2N) and free spatial DOF k.
  double coef(int kappa, int k) const { return kappa == 0 ? a0[k] : x[(kappa - 1) * n_space() + k]; }
  /// Coefficient addressed by global edge id (zero on boundary edges).
  double coef_edge(int kappa, int edge) const {
    const int k = dofmap.free_of_edge[edge];
    return k < 0 ? 0.0 : coef(kappa, k);
  }

  EvalResult evaluate(double t, const Vec2& p) const;
};

SolutionCoefficients solve(const ProblemData& problem);

/// Export "kappa,k,value" CSV rows (kappa = 0 block included).
void write_solution_csv(const SolutionCoefficients& sol, std::ostream& out);

}  // namespace stwave
