#include "stwave/temporal_fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stwave {

TimePartition TimePartition::equidistant(double T, int n_elements) {
  if (!(T > 0.0)) throw std::invalid_argument("TimePartition: T must be positive");
  if (n_elements < 1) throw std::invalid_argument("TimePartition: need at least one element");
  TimePartition p;
  p.t_nodes.resize(n_elements + 1);
  for (int i = 0; i <= n_elements; ++i) p.t_nodes[i] = T * i / n_elements;
  return p;
}

TimePartition TimePartition::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2 || nodes.front() != 0.0) {
    throw std::invalid_argument("TimePartition: nodes must start at 0 with >= 2 entries");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw std::invalid_argument("TimePartition: nodes must increase strictly");
    }
  }
  TimePartition p;
  p.t_nodes = std::move(nodes);
  return p;
}

bool TimePartition::is_equidistant(double rel_tol) const {
  const double h0 = h(0);
  for (int e = 1; e < n_elements(); ++e) {
    if (std::abs(h(e) - h0) > rel_tol * h0) return false;
  }
  return true;
}

double TimePartition::quad_node_time(int g) const {
  const int e = g / 2;
  if (g % 2 == 0) return t_nodes[e];
  return 0.5 * (t_nodes[e] + t_nodes[e + 1]);
}

TemporalElementMatrices quadratic_element_matrices(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("quadratic_element_matrices: h must be positive");
  TemporalElementMatrices m;
  m.mass << 4, 2, -1, 2, 16, 2, -1, 2, 4;
  m.mass *= h / 30.0;
  m.stiffness << 7, -8, 1, -8, 16, -8, 1, -8, 7;
  m.stiffness *= 1.0 / (3.0 * h);
  // int phi_j'(t) phi_i(t) dt on [0,h]; scale-free.
  m.transport << -3, 4, -1, -4, 0, 4, 1, -4, 3;
  m.transport /= 6.0;
  return m;
}

TemporalMatricesFull assemble_temporal_full(const TimePartition& partition) {
  const int n = partition.n_elements();
  const int dim = 2 * n + 1;
  TemporalMatricesFull full;
  full.A_tt = Eigen::MatrixXd::Zero(dim, dim);
  full.A_t = Eigen::MatrixXd::Zero(dim, dim);
  full.M_t = Eigen::MatrixXd::Zero(dim, dim);
  for (int e = 0; e < n; ++e) {
    const TemporalElementMatrices local = quadratic_element_matrices(partition.h(e));
    const int base = 2 * e;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        full.A_tt(base + i, base + j) += local.stiffness(i, j);
        full.A_t(base + i, base + j) += local.transport(i, j);
        full.M_t(base + i, base + j) += local.mass(i, j);
      }
    }
  }
  return full;
}

TemporalMatrices assemble_temporal(const TimePartition& partition) {
  const TemporalMatricesFull full = assemble_temporal_full(partition);
  const int n = partition.n_dofs();
  TemporalMatrices m;
  // Test rows ell = 0..n-1 drop the t=T node, trial columns kappa = 1..n the t=0 node.
  m.A_tt = full.A_tt.block(0, 1, n, n);
  m.A_t = full.A_t.block(0, 1, n, n);
  m.M_t = full.M_t.block(0, 1, n, n);
  m.initial.a_tt = full.A_tt.block(0, 0, n, 1);
  m.initial.a_t = full.A_t.block(0, 0, n, 1);
  m.initial.m_t = full.M_t.block(0, 0, n, 1);
  return m;
}

TemporalInitialColumns initial_row_columns(const TimePartition& partition) {
  return assemble_temporal(partition).initial;
}

void quadratic_shape(double xi, double n[3]) {
  n[0] = (1.0 - xi) * (1.0 - 2.0 * xi);
  n[1] = 4.0 * xi * (1.0 - xi);
  n[2] = xi * (2.0 * xi - 1.0);
}

void quadratic_shape_deriv(double xi, double dn[3]) {
  dn[0] = 4.0 * xi - 3.0;
  dn[1] = 4.0 - 8.0 * xi;
  dn[2] = 4.0 * xi - 1.0;
}

double quadratic_basis_value(const TimePartition& partition, int g, double t) {
  const int n = partition.n_elements();
  double value = 0.0;
  for (int e = 0; e < n; ++e) {
    if (t < partition.t_nodes[e] || t > partition.t_nodes[e + 1]) continue;
    const int local = g - 2 * e;
    if (local < 0 || local > 2) continue;
    const double xi = (t - partition.t_nodes[e]) / partition.h(e);
    double shape[3];
    quadratic_shape(xi, shape);
    value = shape[local];
    break;  // element boundaries: either element gives the same nodal value
  }
  return value;
}

double linear_hat_value(const TimePartition& partition, int m, double t) {
  const int n = partition.n_elements();
  if (m > 0 && t >= partition.t_nodes[m - 1] && t <= partition.t_nodes[m]) {
    return (t - partition.t_nodes[m - 1]) / partition.h(m - 1);
  }
  if (m < n && t >= partition.t_nodes[m] && t <= partition.t_nodes[m + 1]) {
    return (partition.t_nodes[m + 1] - t) / partition.h(m);
  }
  return 0.0;
}

}  // namespace stwave
