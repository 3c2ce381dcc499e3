#include "stwave/system.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>
#include <stdexcept>

#include "stwave/quadrature.hpp"

namespace stwave {

namespace {

// Cached spatial quadrature data reused across all time steps.
struct SpatialQuadCache {
  struct Point {
    Vec2 x;
    double weight;                 // rule weight * element area
    std::array<Vec2, 3> rt;        // RT basis values
    std::array<int, 3> edges;      // global edge ids
  };
  std::vector<Point> points;
};

SpatialQuadCache build_spatial_cache(const TriMesh& mesh, int degree) {
  SpatialQuadCache cache;
  const auto rule = triangle_rule(degree);
  cache.points.reserve(mesh.num_triangles() * rule.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const RtTriangle rt = RtTriangle::from(mesh, t);
    for (const auto& qp : rule) {
      SpatialQuadCache::Point pt;
      const double bary[3] = {qp.l0, qp.l1, qp.l2};
      pt.x = rt.point(bary);
      pt.weight = qp.w * rt.area;
      Vec2 vals[3];
      rt.values(bary, vals);
      for (int k = 0; k < 3; ++k) {
        pt.rt[k] = vals[k];
        pt.edges[k] = mesh.triangle_edges[t][k];
      }
      cache.points.push_back(pt);
    }
  }
  return cache;
}

// Mixed temporal mass (int hat_m phi^2_ell dt), test rows ell = 0..2N-1.
Eigen::MatrixXd temporal_linear_quadratic_mass(const TimePartition& partition) {
  const int n_test = partition.n_dofs();
  const int n_lin = partition.n_elements() + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_test, n_lin);
  const auto rule = gauss_rule(3);  // integrand degree 3
  for (int e = 0; e < partition.n_elements(); ++e) {
    const double h = partition.h(e);
    for (const auto& gp : rule) {
      double shape[3];
      quadratic_shape(gp.x, shape);
      const double lin[2] = {1.0 - gp.x, gp.x};
      for (int a = 0; a < 3; ++a) {
        const int ell = 2 * e + a;
        if (ell >= n_test) continue;  // the t=T test node is excluded
        for (int b = 0; b < 2; ++b) m(ell, e + b) += shape[a] * lin[b] * gp.w * h;
      }
    }
  }
  return m;
}

}  // namespace

RtProjection project_rhs_rt(const SpaceTimeField& j_a, const TriMesh& mesh,
                            const TimePartition& partition, const QuadratureConfig& quad) {
  const int n_lin = partition.n_elements() + 1;
  const int n_edges = mesh.num_edges();
  RtProjection proj;
  proj.coef = Eigen::MatrixXd::Zero(n_lin, n_edges);
  if (!j_a) return proj;

  // Moments (j_a, hat_m phi_r)_{L2(Q)}.
  Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(n_lin, n_edges);
  const SpatialQuadCache cache = build_spatial_cache(mesh, quad.moment_space_degree);
  const auto trule = gauss_rule(quad.moment_time_points);
  for (int e = 0; e < partition.n_elements(); ++e) {
    const double h = partition.h(e);
    for (const auto& gp : trule) {
      const double t = partition.t_nodes[e] + gp.x * h;
      const double wt = gp.w * h;
      const double lin[2] = {1.0 - gp.x, gp.x};
      for (const auto& pt : cache.points) {
        const Vec2 j = j_a(t, pt.x);
        for (int k = 0; k < 3; ++k) {
          const double s = j.dot(pt.rt[k]) * pt.weight * wt;
          moments(e, pt.edges[k]) += s * lin[0];
          moments(e + 1, pt.edges[k]) += s * lin[1];
        }
      }
    }
  }

  // Tensor Gram solve: (M_t1 (x) M_rt) vec(P) = vec(moments).
  Eigen::MatrixXd m_t1 = Eigen::MatrixXd::Zero(n_lin, n_lin);
  for (int e = 0; e < partition.n_elements(); ++e) {
    const double h = partition.h(e);
    m_t1(e, e) += h / 3.0;
    m_t1(e, e + 1) += h / 6.0;
    m_t1(e + 1, e) += h / 6.0;
    m_t1(e + 1, e + 1) += h / 3.0;
  }
  const Eigen::MatrixXd z = m_t1.llt().solve(moments);

  SparseCholesky rt_gram(assemble_rt_mass(mesh));
  for (int m = 0; m < n_lin; ++m) {
    proj.coef.row(m) = rt_gram.solve(z.row(m).transpose()).transpose();
  }
  return proj;
}

Eigen::VectorXd assemble_rhs(const TriMesh& mesh, const EdgeDofMap& dofmap,
                             const TimePartition& partition, const RtProjection& projection,
                             const SpatialField& psi, const MaterialModel& material,
                             const QuadratureConfig& quad) {
  const int n_time = partition.n_dofs();
  const int n_free = dofmap.n_free;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<std::int64_t>(n_time) * n_free);

  if (projection.coef.size() != 0 && projection.coef.cwiseAbs().maxCoeff() > 0.0) {
    const CsrMatrix mixed = assemble_nedelec_rt_mixed(mesh, dofmap);
    const Eigen::MatrixXd t1 = temporal_linear_quadratic_mass(partition);
    const int n_lin = partition.n_elements() + 1;
    // rhs_ell += sum_m t1(ell, m) * X1 * P_m
    std::vector<Eigen::VectorXd> y(n_lin);
    for (int m = 0; m < n_lin; ++m) y[m] = matvec(mixed, projection.coef.row(m).transpose());
    for (int ell = 0; ell < n_time; ++ell) {
      for (int m = 0; m < n_lin; ++m) {
        const double w = t1(ell, m);
        if (w == 0.0) continue;
        rhs.segment(static_cast<std::int64_t>(ell) * n_free, n_free) += w * y[m];
      }
    }
  }

  if (psi) {
    // (eps psi, psi_l): integration by parts in time puts this term on the
    // right-hand side with the trace value of the test function at t=0, which
    // is nonzero only for the ell = 0 nodal function.
    Eigen::VectorXd moment = Eigen::VectorXd::Zero(n_free);
    const auto rule = triangle_rule(quad.moment_space_degree);
    Vec2 w[3];
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const WhitneyTriangle tri = WhitneyTriangle::from(mesh, t);
      for (const auto& qp : rule) {
        const double bary[3] = {qp.l0, qp.l1, qp.l2};
        const Vec2 x = tri.point(bary);
        tri.values(bary, w);
        const Vec2 eps_psi = material.epsilon(x) * psi(x);
        const double dx = qp.w * tri.area;
        for (int k = 0; k < 3; ++k) {
          const int l = dofmap.free_of_edge[mesh.triangle_edges[t][k]];
          if (l >= 0) moment[l] += eps_psi.dot(w[k]) * dx;
        }
      }
    }
    rhs.segment(0, n_free) += moment;
  }
  return rhs;
}

InitialLift assemble_initial_lift(const TriMesh& mesh, const EdgeDofMap& dofmap,
                                  const TimePartition& partition, const SpatialField& phi,
                                  const SpatialMatrices& spatial,
                                  const TemporalInitialColumns& initial_columns) {
  const int n_time = partition.n_dofs();
  const int n_free = dofmap.n_free;
  InitialLift out;
  out.lift = Eigen::VectorXd::Zero(static_cast<std::int64_t>(n_time) * n_free);
  out.a0_free = Eigen::VectorXd::Zero(n_free);
  if (!phi) return out;

  const Eigen::VectorXd all = nedelec_interpolate(mesh, phi);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.boundary_edge_flags[e]) {
      out.max_boundary_moment = std::max(out.max_boundary_moment, std::abs(all[e]));
    } else {
      out.a0_free[dofmap.free_of_edge[e]] = all[e];
    }
  }
  if (out.max_boundary_moment > 1e-10) {
    std::cerr << "stwave: warning: initial value has nonzero tangential boundary moments ("
              << out.max_boundary_moment << "); they are dropped by the trace condition\n";
  }

  const Eigen::VectorXd mx_a0 = matvec(spatial.M_x, out.a0_free);
  const Eigen::VectorXd ms_a0 =
      spatial.M_x_sigma.nnz() > 0 ? matvec(spatial.M_x_sigma, out.a0_free)
                                  : Eigen::VectorXd(Eigen::VectorXd::Zero(n_free));
  const Eigen::VectorXd ax_a0 = matvec(spatial.A_xx, out.a0_free);
  for (int ell = 0; ell < n_time; ++ell) {
    out.lift.segment(static_cast<std::int64_t>(ell) * n_free, n_free) +=
        -initial_columns.a_tt[ell] * mx_a0 + initial_columns.a_t[ell] * ms_a0 +
        initial_columns.m_t[ell] * ax_a0;
  }
  return out;
}

SpaceTimeSystem build_system(const ProblemData& problem) {
  SpaceTimeSystem sys;
  sys.dofmap = EdgeDofMap::interior(problem.mesh);
  sys.n_time = problem.partition.n_dofs();
  sys.n_space = sys.dofmap.n_free;

  const SpatialMatrices spatial = assemble_spatial(problem.mesh, problem.material, sys.dofmap);
  const TemporalMatrices temporal = assemble_temporal(problem.partition);

  CsrMatrix k = add(kron(Eigen::MatrixXd(-temporal.A_tt), spatial.M_x),
                    kron(temporal.M_t, spatial.A_xx));
  // The damping term is dropped, not zero-multiplied, when sigma vanishes.
  if (!problem.material.sigma_is_zero() && spatial.M_x_sigma.nnz() > 0) {
    k = add(std::move(k), kron(temporal.A_t, spatial.M_x_sigma));
  }
  sys.K = std::move(k);

  const RtProjection projection =
      project_rhs_rt(problem.j_a, problem.mesh, problem.partition, problem.quad);
  sys.rhs = assemble_rhs(problem.mesh, sys.dofmap, problem.partition, projection, problem.psi,
                         problem.material, problem.quad);

  const InitialLift lift = assemble_initial_lift(problem.mesh, sys.dofmap, problem.partition,
                                                 problem.phi, spatial, temporal.initial);
  sys.rhs -= lift.lift;
  sys.a0_free = lift.a0_free;

  if (sys.K.rows() != sys.n_time * sys.n_space || sys.K.rows() != sys.K.cols()) {
    throw DimensionError("build_system: Petrov index ranges produced a non-square system");
  }
  return sys;
}

SolutionCoefficients solve(const ProblemData& problem) {
  SpaceTimeSystem sys = build_system(problem);
  SolutionCoefficients sol;
  sol.mesh = problem.mesh;
  sol.partition = problem.partition;
  sol.dofmap = std::move(sys.dofmap);
  sol.a0 = std::move(sys.a0_free);
  sol.x = sparse_solve(sys.K, sys.rhs);
  return sol;
}

EvalResult SolutionCoefficients::evaluate(double t, const Vec2& p) const {
  if (t < -1e-12 || t > partition.T() * (1.0 + 1e-12)) {
    throw std::out_of_range("SolutionCoefficients::evaluate: t outside [0,T]");
  }
  const int tri_id = mesh.locate(p);
  const WhitneyTriangle tri = WhitneyTriangle::from(mesh, tri_id);

  // Barycentric coordinates of p.
  const double inv2a = 1.0 / (2.0 * tri.area);
  double bary[3];
  bary[0] = cross2(tri.vertex[1] - p, tri.vertex[2] - p) * inv2a;
  bary[1] = cross2(tri.vertex[2] - p, tri.vertex[0] - p) * inv2a;
  bary[2] = 1.0 - bary[0] - bary[1];

  Vec2 w[3];
  tri.values(bary, w);

  int e = 0;
  const int n = partition.n_elements();
  while (e + 1 < n && t > partition.t_nodes[e + 1]) ++e;
  const double h = partition.h(e);
  const double xi = std::clamp((t - partition.t_nodes[e]) / h, 0.0, 1.0);
  double shape[3], dshape[3];
  quadratic_shape(xi, shape);
  quadratic_shape_deriv(xi, dshape);

  EvalResult r{Vec2::Zero(), Vec2::Zero(), 0.0};
  for (int a = 0; a < 3; ++a) {
    const int kappa = 2 * e + a;
    Vec2 spatial_value = Vec2::Zero();
    double spatial_curl = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double c = coef_edge(kappa, mesh.triangle_edges[tri_id][k]);
      spatial_value += c * w[k];
      spatial_curl += c * tri.curl[k];
    }
    r.value += shape[a] * spatial_value;
    r.dt_value += (dshape[a] / h) * spatial_value;
    r.curl += shape[a] * spatial_curl;
  }
  return r;
}

void write_solution_csv(const SolutionCoefficients& sol, std::ostream& out) {
  out << "kappa,k,value\n";
  char line[64];
  for (int k = 0; k < sol.n_space(); ++k) {
    std::snprintf(line, sizeof line, "0,%d,%.17g\n", k, sol.a0[k]);
    out << line;
  }
  for (int kappa = 1; kappa <= sol.n_time(); ++kappa) {
    for (int k = 0; k < sol.n_space(); ++k) {
      std::snprintf(line, sizeof line, "%d,%d,%.17g\n", kappa, k, sol.coef(kappa, k));
      out << line;
    }
  }
}

}  // namespace stwave
