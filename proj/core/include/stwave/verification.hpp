#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "stwave/system.hpp"

namespace stwave {

/// Manufactured solution on Q = (0,T) x (0,1)^2 with its exact derivatives and
/// the source derived symbolically from the strong equation. All three cases
/// have homogeneous initial conditions and vanishing tangential trace.
struct ManufacturedCase {
  std::string name;
  double default_T = 2.0;
  MaterialModel material;
  SpaceTimeField A;
  SpaceTimeField dt_A;
  std::function<double(double, const Vec2&)> curl_A;
  SpaceTimeField source;

  static ManufacturedCase make(std::string_view name);

  /// Same case with the conductivity replaced and the source rebuilt so that
  /// the exact solution is preserved.
  ManufacturedCase with_sigma(MaterialModel material_override) const;
};

/// ||A - A_h||_{L2(Q)} by tensor quadrature (Gauss in time x symmetric
/// triangle rule in space).
double error_L2Q(const SolutionCoefficients& sol, const ManufacturedCase& c,
                 const QuadratureConfig& quad = {});

/// sqrt(||dt(A - A_h)||^2_{L2_eps} + ||curl(A - A_h)||^2_{L2_mu}).
double error_seminorm(const SolutionCoefficients& sol, const ManufacturedCase& c,
                      const QuadratureConfig& quad = {});

struct ConvergenceRow {
  int level = 0;
  double h_x = 0.0;  // cell edge length of the structured mesh
  double h_t = 0.0;
  long n_dofs = 0;
  double err_l2 = 0.0;
  double eoc_l2 = 0.0;  // 0 marks an empty EOC cell
  double err_semi = 0.0;
  double eoc_semi = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

/// Solves the case on levels of the structured mesh (n = n0 * 2^(level-1))
/// with h_t equal to the mesh cell size, and tabulates errors and EOC.
ConvergenceTable run_convergence_study(const ManufacturedCase& c, const std::vector<int>& levels,
                                       double T, int n0 = 2);

struct SweepCell {
  double err_l2 = 0.0;
  double err_semi = 0.0;
  double q_predicted = 0.0;  // lambda_max(h_x) * h_t^2
  bool predicted_stable = true;
  bool blown_up = false;
};

struct CflSweepResult {
  std::vector<double> h_x;  // area-convention mesh sizes (max area^1/2)
  std::vector<int> n_per_side;
  std::vector<double> h_t;
  std::vector<std::vector<SweepCell>> cells;  // [hx][ht]
};

/// Error grid over mesh-size / time-step combinations. h_x values use the
/// area convention h = sqrt(1/(2 n^2)) of the structured unit-square mesh and
/// are mapped to the nearest n. Cells whose error exceeds 1e3 times the finest
/// predicted-stable error are flagged as blown up.
CflSweepResult run_cfl_sweep(const ManufacturedCase& c, const std::vector<double>& hx_list,
                             const std::vector<double>& ht_list, double T);

void convergence_to_csv(const ConvergenceTable& table, std::ostream& out);
void convergence_to_markdown(const ConvergenceTable& table, std::ostream& out);
void sweep_to_csv(const CflSweepResult& sweep, std::ostream& out);
void sweep_to_markdown(const CflSweepResult& sweep, std::ostream& out);

/// n for a structured unit-square mesh with max area^(1/2) closest to h.
int n_from_area_h(double h);

}  // namespace stwave
