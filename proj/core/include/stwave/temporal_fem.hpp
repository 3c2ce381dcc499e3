#pragma once

#include <vector>

#include <Eigen/Core>

namespace stwave {

/// Decomposition 0 = t_0 < t_1 < ... < t_N = T of the time interval.
struct TimePartition {
  std::vector<double> t_nodes;

  static TimePartition equidistant(double T, int n_elements);
  static TimePartition from_nodes(std::vector<double> nodes);

  int n_elements() const { return static_cast<int>(t_nodes.size()) - 1; }
  double T() const { return t_nodes.back(); }
  double h(int e) const { return t_nodes[e + 1] - t_nodes[e]; }
  bool is_equidistant(double rel_tol = 1e-12) const;

  /// Number of trial/test functions: twice the element count (quadratic
  /// elements, one endpoint node removed from each space).
  int n_dofs() const { return 2 * n_elements(); }

  /// Time of the quadratic global node g in 0..2*n_elements
  /// (even: element boundary, odd: element midpoint).
  double quad_node_time(int g) const;
};

/// Per-element matrices of the nodal quadratic basis on [0,h], nodes {0,h/2,h}.
/// Rows are test indices, columns trial indices:
///   mass[i][j]      = int phi_j phi_i
///   stiffness[i][j] = int phi_j' phi_i'
///   transport[i][j] = int phi_j' phi_i      (h-independent)
struct TemporalElementMatrices {
  Eigen::Matrix3d mass, stiffness, transport;
};
TemporalElementMatrices quadratic_element_matrices(double h);

/// Columns multiplying the t=0 nodal value, used for the initial-data lift.
struct TemporalInitialColumns {
  Eigen::VectorXd a_tt, a_t, m_t;
};

/// Galerkin-Petrov matrices: trial functions vanish at t=0 (kappa = 1..2N),
/// test functions at t=T (ell = 0..2N-1). Row ell / column kappa-1 storage.
struct TemporalMatrices {
  Eigen::MatrixXd A_tt, A_t, M_t;
  TemporalInitialColumns initial;  // the kappa = 0 columns
};

TemporalMatrices assemble_temporal(const TimePartition& partition);
TemporalInitialColumns initial_row_columns(const TimePartition& partition);

/// Unrestricted (2N+1)^2 assembly over all quadratic nodes; used by the
/// restricted assembly and handy for cross checks.
struct TemporalMatricesFull {
  Eigen::MatrixXd A_tt, A_t, M_t;
};
TemporalMatricesFull assemble_temporal_full(const TimePartition& partition);

/// Nodal quadratic shape functions on the unit interval, nodes {0, 1/2, 1}.
void quadratic_shape(double xi, double n[3]);
void quadratic_shape_deriv(double xi, double dn[3]);

/// Value of the global quadratic basis function for node g at time t.
double quadratic_basis_value(const TimePartition& partition, int g, double t);

/// Piecewise-linear hat for partition node m (m = 0..N) at time t.
double linear_hat_value(const TimePartition& partition, int m, double t);

}  // namespace stwave
