#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "stwave/linalg.hpp"
#include "stwave/mesh.hpp"

namespace stwave {

/// Matrices of the two-step recursion A z_k = B1 z_{k-1} + B2 z_{k-2} obtained
/// from the time-discrete modal equation (-A_tt + lambda M_t) a = 0 on an
/// equidistant partition, scaled by 3h. Everything depends only on the
/// dimensionless q = lambda * h_t^2. The companion form is
/// A_sys = [[0, I], [A^-1 B2, A^-1 B1]].
struct TwoStepMatrices {
  double q, a, b, c, d;
  Eigen::Matrix2d A, B1, B2;
  Eigen::Matrix4d A_sys;

  static TwoStepMatrices from_q(double q);
};

struct ClosedFormEigenvalues {
  std::complex<double> lambda3, lambda4;
};

/// The two nonzero eigenvalues of A_sys in closed form (the other two vanish).
ClosedFormEigenvalues closed_form_eigenvalues(double q);

/// All four eigenvalues of the assembled A_sys, sorted by ascending modulus.
std::array<std::complex<double>, 4> numerical_eigenvalues(double q);

enum class StabilityCriterion {
  strict_no_band,  // |Re lambda| <= 1: q <= 60 and q outside the open band (10,12)
  relaxed,         // band suppressed by strong damping: q <= 60
};

struct StabilityReport {
  double q = 0.0;
  std::array<std::complex<double>, 4> eigenvalues{};
  double max_abs_re = 0.0;
  double max_abs = 0.0;
  bool stable_strict = false;
  bool stable_relaxed = false;
};

StabilityReport analyze_q(double q);
bool classify(double q, StabilityCriterion criterion);

/// Iterates Y_k = A_sys Y_{k-1} from u_{-1} = 0 and the paper-consistent
/// (u_1, u_2) start. u holds u_0 .. u_{2 n_steps}.
struct RecursionResult {
  std::vector<double> u;
  double growth_factor = 0.0;  // (|Y_n| / |Y_1|)^(1/(n-1)); 0 for zero data
  bool saturated = false;
};
RecursionResult simulate_recursion(double q, int n_steps, double u0);

/// Inverse-inequality constant of ||curl u_h|| <= sqrt(c_I) h^-1 ||u_h||,
/// evaluated elementwise from the affine reference map (the tightest vertex
/// labeling) and maximized; 18 on the structured right-isosceles meshes.
double inverse_inequality_constant(const TriMesh& mesh);

/// Conservative shape-regularity fallback 18 c_F^2 / pi.
double inverse_inequality_constant_from_shape(double c_F);

struct CflBounds {
  double c_I = 0.0;
  double ratio_strict = 0.0;   // sqrt(10 / c_I)
  double ratio_relaxed = 0.0;  // sqrt(60 / c_I)
};
CflBounds cfl_bounds(double c_I);

/// Largest generalized eigenvalue of A_xx x = lambda M_x x by power iteration
/// on M_x^-1 A_xx (M_x symmetric positive definite). Throws on non-convergence.
double max_generalized_eigenvalue(const CsrMatrix& a_xx, const CsrMatrix& m_x,
                                  double rel_tol = 1e-11, int max_iterations = 100000);

struct StabilitySweep {
  std::vector<StabilityReport> rows;
  /// Maximal contiguous strictly-unstable q intervals found on the grid.
  std::vector<std::array<double, 2>> unstable_intervals;
};
StabilitySweep run_stability_sweep(double q_min, double q_max, double step);
void write_stability_sweep_csv(const StabilitySweep& sweep, std::ostream& out);

}  // namespace stwave
