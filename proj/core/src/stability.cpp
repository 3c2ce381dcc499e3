#include "stwave/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace stwave {

namespace {
constexpr double kReThreshold = 1.0 + 1e-12;
constexpr double kQThreshold = 60.0;
}  // namespace

TwoStepMatrices TwoStepMatrices::from_q(double q) {
  if (!(q >= 0.0)) throw std::invalid_argument("TwoStepMatrices: q must be nonnegative");
  TwoStepMatrices m;
  m.q = q;
  m.a = 8.0 + q / 5.0;
  m.b = -16.0 + 8.0 * q / 5.0;
  m.c = -1.0 - q / 10.0;
  m.d = 14.0 - 4.0 * q / 5.0;
  m.A << m.a, m.c, m.b, m.a;
  m.B1 << -m.a, m.d, 0.0, -m.a;
  // Entry from the assembled recursion; equals 1 + q/10.
  m.B2 << 0.0, -m.c, 0.0, 0.0;

  const double det = m.a * m.a - m.b * m.c;
  if (det == 0.0) throw SingularMatrixError("TwoStepMatrices: A is singular (a^2 = bc)");
  Eigen::Matrix2d a_inv;
  a_inv << m.a, -m.c, -m.b, m.a;
  a_inv /= det;

  m.A_sys.setZero();
  m.A_sys.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
  m.A_sys.block<2, 2>(2, 0) = a_inv * m.B2;
  m.A_sys.block<2, 2>(2, 2) = a_inv * m.B1;
  return m;
}

ClosedFormEigenvalues closed_form_eigenvalues(double q) {
  const TwoStepMatrices m = TwoStepMatrices::from_q(q);
  const double a = m.a, b = m.b, c = m.c, d = m.d;
  const double det = a * a - b * c;
  const std::complex<double> radicand(b * (2.0 * c + d) * (4.0 * a * a - 2.0 * b * c + b * d), 0.0);
  const std::complex<double> root = std::sqrt(radicand);
  const double base = -2.0 * a * a - b * d;
  return {(base + root) / (2.0 * det), (base - root) / (2.0 * det)};
}

std::array<std::complex<double>, 4> numerical_eigenvalues(double q) {
  const TwoStepMatrices m = TwoStepMatrices::from_q(q);
  Eigen::EigenSolver<Eigen::Matrix4d> solver(m.A_sys);
  std::array<std::complex<double>, 4> eigs;
  for (int i = 0; i < 4; ++i) eigs[i] = solver.eigenvalues()[i];
  std::sort(eigs.begin(), eigs.end(), [](const auto& x, const auto& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax < ay;
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return eigs;
}

StabilityReport analyze_q(double q) {
  StabilityReport r;
  r.q = q;
  r.eigenvalues = numerical_eigenvalues(q);
  const ClosedFormEigenvalues cf = closed_form_eigenvalues(q);
  r.max_abs_re = std::max(std::abs(cf.lambda3.real()), std::abs(cf.lambda4.real()));
  r.max_abs = std::max(std::abs(cf.lambda3), std::abs(cf.lambda4));
  r.stable_strict = r.max_abs_re <= kReThreshold;
  r.stable_relaxed = q <= kQThreshold * (1.0 + 1e-12);
  return r;
}

bool classify(double q, StabilityCriterion criterion) {
  const StabilityReport r = analyze_q(q);
  return criterion == StabilityCriterion::strict_no_band ? r.stable_strict : r.stable_relaxed;
}

RecursionResult simulate_recursion(double q, int n_steps, double u0) {
  if (n_steps < 1) throw std::invalid_argument("simulate_recursion: need n_steps >= 1");
  const TwoStepMatrices m = TwoStepMatrices::from_q(q);

  Eigen::Vector2d start(7.0 - 2.0 * q / 5.0, -8.0 - q / 5.0);
  const Eigen::Vector2d z1 = m.A.partialPivLu().solve(start * u0);

  Eigen::Vector4d y;
  y << 0.0, u0, z1(0), z1(1);  // (u_-1, u_0, u_1, u_2)

  RecursionResult result;
  result.u = {u0, z1(0), z1(1)};
  const double norm1 = y.norm();
  if (norm1 == 0.0) {
    result.u.assign(2 * n_steps + 1, 0.0);
    return result;
  }

  int k = 1;
  for (; k < n_steps; ++k) {
    y = m.A_sys * y;
    result.u.push_back(y(2));
    result.u.push_back(y(3));
    if (y.norm() > 1e150) {
      result.saturated = true;
      ++k;
      break;
    }
  }
  result.growth_factor = k > 1 ? std::pow(y.norm() / norm1, 1.0 / (k - 1)) : 1.0;
  return result;
}

double inverse_inequality_constant(const TriMesh& mesh) {
  double h_max_sq = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    h_max_sq = std::max(h_max_sq, mesh.triangle_area(t));
  }
  double c_i = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    if (!(area > 0.0)) throw std::invalid_argument("inverse_inequality_constant: degenerate element");
    // Tightest affine reference map over the cyclic vertex labelings.
    double lam_best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < 3; ++r) {
      const Vec2& p0 = mesh.vertices[tri[r]];
      const Vec2& p1 = mesh.vertices[tri[(r + 1) % 3]];
      const Vec2& p2 = mesh.vertices[tri[(r + 2) % 3]];
      Mat2 j;
      j.col(0) = p1 - p0;
      j.col(1) = p2 - p0;
      const Mat2 jjt = j * j.transpose();
      const double tr = jjt.trace();
      const double dt = jjt.determinant();
      const double lam_max = 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4.0 * dt)));
      lam_best = std::min(lam_best, lam_max);
    }
    // Elementwise bound 18 lam_max(J J^T) / (2 Delta) * h_l^-2, normalized by h_max^2.
    c_i = std::max(c_i, 18.0 * lam_best / (2.0 * area) * (h_max_sq / area));
  }
  return c_i;
}

double inverse_inequality_constant_from_shape(double c_F) {
  return 18.0 * c_F * c_F / M_PI;
}

CflBounds cfl_bounds(double c_I) {
  if (!(c_I > 0.0)) throw std::invalid_argument("cfl_bounds: c_I must be positive");
  return {c_I, std::sqrt(10.0 / c_I), std::sqrt(60.0 / c_I)};
}

double max_generalized_eigenvalue(const CsrMatrix& a_xx, const CsrMatrix& m_x, double rel_tol,
                                  int max_iterations) {
  const int n = a_xx.rows();
  if (a_xx.cols() != n || m_x.rows() != n || m_x.cols() != n) {
    throw DimensionError("max_generalized_eigenvalue: shape mismatch");
  }
  SparseCholesky mass(m_x);

  std::mt19937 rng(20240517u);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = unit(rng);
  x /= x.norm();

  double lambda_prev = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd ax = matvec(a_xx, x);
    Eigen::VectorXd y = mass.solve(ax);
    const double m_norm = std::sqrt(y.dot(matvec(m_x, y)));
    if (!(m_norm > 0.0)) throw std::runtime_error("max_generalized_eigenvalue: breakdown");
    y /= m_norm;
    const double lambda = y.dot(matvec(a_xx, y)) / y.dot(matvec(m_x, y));
    x = y;
    if (it > 2 && std::abs(lambda - lambda_prev) <= rel_tol * std::abs(lambda)) return lambda;
    lambda_prev = lambda;
  }
  throw std::runtime_error("max_generalized_eigenvalue: power iteration did not converge");
}

StabilitySweep run_stability_sweep(double q_min, double q_max, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("run_stability_sweep: step must be positive");
  StabilitySweep sweep;
  const int count = q_max < q_min ? 0 : static_cast<int>(std::floor((q_max - q_min) / step + 0.5)) + 1;
  sweep.rows.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double q = q_min + i * step;
    if (q < 0.0) continue;
    sweep.rows.push_back(analyze_q(q));
  }
  bool open = false;
  double lo = 0.0, hi = 0.0;
  for (const auto& row : sweep.rows) {
    if (!row.stable_strict) {
      if (!open) lo = row.q;
      hi = row.q;
      open = true;
    } else if (open) {
      sweep.unstable_intervals.push_back({lo, hi});
      open = false;
    }
  }
  if (open) sweep.unstable_intervals.push_back({lo, hi});
  return sweep;
}

void write_stability_sweep_csv(const StabilitySweep& sweep, std::ostream& out) {
  out << "q,re_lambda_max,abs_lambda_max,verdict_strict,verdict_relaxed\n";
  char line[160];
  for (const auto& r : sweep.rows) {
    std::snprintf(line, sizeof line, "%.10g,%.12e,%.12e,%s,%s\n", r.q, r.max_abs_re, r.max_abs,
                  r.stable_strict ? "stable" : "unstable",
                  r.stable_relaxed ? "stable" : "unstable");
    out << line;
  }
  out << "# measured_unstable_intervals:";
  for (const auto& band : sweep.unstable_intervals) {
    std::snprintf(line, sizeof line, " [%.10g,%.10g]", band[0], band[1]);
    out << line;
  }
  out << "\n";
}

}  // namespace stwave
