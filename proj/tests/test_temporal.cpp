#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "stwave/quadrature.hpp"
#include "stwave/temporal_fem.hpp"

using namespace stwave;

namespace {

// Small exact-rational toolbox for the symbolic integration oracle.
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
  Frac operator*(const Frac& o) const { return Frac(n * o.n, d * o.d); }
  bool operator==(const Frac& o) const { return n == o.n && d == o.d; }
};

using Poly = std::vector<long long>;  // integer coefficients, index = power

Poly multiply(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Frac integrate01(const Poly& p) {
  Frac acc(0);
  for (std::size_t k = 0; k < p.size(); ++k) acc = acc + Frac(p[k], static_cast<long long>(k) + 1);
  return acc;
}

// Nodal quadratic Lagrange basis on [0,1] with nodes {0, 1/2, 1}.
const Poly kShape[3] = {{1, -3, 2}, {0, 4, -4}, {0, -1, 2}};
const Poly kShapeDeriv[3] = {{-3, 4}, {4, -8}, {-1, 4}};

Eigen::MatrixXd quadrature_oracle_full(const TimePartition& part, bool d_trial, bool d_test) {
  // Degree-4 Gauss integration of the requested basis pairing; exact for the
  // (at most) quartic integrands.
  const int dim = 2 * part.n_elements() + 1;
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(dim, dim);
  const auto rule = gauss_rule(3);
  for (int e = 0; e < part.n_elements(); ++e) {
    const double h = part.h(e);
    for (const auto& gp : rule) {
      double shape[3], deriv[3];
      quadratic_shape(gp.x, shape);
      quadratic_shape_deriv(gp.x, deriv);
      for (int i = 0; i < 3; ++i) {    // test
        for (int j = 0; j < 3; ++j) {  // trial
          const double trial = d_trial ? deriv[j] / h : shape[j];
          const double test = d_test ? deriv[i] / h : shape[i];
          full(2 * e + i, 2 * e + j) += trial * test * gp.w * h;
        }
      }
    }
  }
  return full;
}

}  // namespace

TEST_CASE("element matrices match the exact rational integrals") {
  // 30 * int N_i N_j, 3 * int N_i' N_j', 6 * int N_j' N_i as integers.
  const long long mass30[3][3] = {{4, 2, -1}, {2, 16, 2}, {-1, 2, 4}};
  const long long stiff3[3][3] = {{7, -8, 1}, {-8, 16, -8}, {1, -8, 7}};
  const long long transport6[3][3] = {{-3, 4, -1}, {-4, 0, 4}, {1, -4, 3}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(integrate01(multiply(kShape[i], kShape[j])) == Frac(mass30[i][j], 30));
      CHECK(integrate01(multiply(kShapeDeriv[i], kShapeDeriv[j])) == Frac(stiff3[i][j], 3));
      // test index i, trial index j
      CHECK(integrate01(multiply(kShapeDeriv[j], kShape[i])) == Frac(transport6[i][j], 6));
    }
  }

  const TemporalElementMatrices m = quadratic_element_matrices(1.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(m.mass(i, j) == doctest::Approx(double(mass30[i][j]) / 30.0).epsilon(1e-15));
      CHECK(m.stiffness(i, j) == doctest::Approx(double(stiff3[i][j]) / 3.0).epsilon(1e-15));
      CHECK(m.transport(i, j) == doctest::Approx(double(transport6[i][j]) / 6.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("printed element matrix values") {
  const TemporalElementMatrices m = quadratic_element_matrices(1.0);
  CHECK(m.mass(1, 1) == doctest::Approx(16.0 / 30.0));
  CHECK(m.stiffness(0, 0) == doctest::Approx(7.0 / 3.0));
  // Column sums of the transport matrix are phi_trial(h) - phi_trial(0).
  const Eigen::Vector3d col_sums = m.transport.colwise().sum();
  CHECK(col_sums(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(col_sums(1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(col_sums(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(quadratic_element_matrices(0.0), std::invalid_argument);
}

TEST_CASE("element matrices scale correctly with h") {
  const double h = 0.37;
  const TemporalElementMatrices unit = quadratic_element_matrices(1.0);
  const TemporalElementMatrices scaled = quadratic_element_matrices(h);
  CHECK((scaled.mass - h * unit.mass).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((scaled.stiffness - unit.stiffness / h).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((scaled.transport - unit.transport).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single element assembly is a 2x2 slice of the element matrices") {
  const double T = 0.8;
  const TimePartition part = TimePartition::equidistant(T, 1);
  const TemporalMatrices m = assemble_temporal(part);
  const TemporalElementMatrices local = quadratic_element_matrices(T);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(m.A_tt(i, j) == doctest::Approx(local.stiffness(i, j + 1)).epsilon(1e-15));
      CHECK(m.A_t(i, j) == doctest::Approx(local.transport(i, j + 1)).epsilon(1e-15));
      CHECK(m.M_t(i, j) == doctest::Approx(local.mass(i, j + 1)).epsilon(1e-15));
    }
  }
}

TEST_CASE("assembled global matrices equal the quadrature oracle entrywise") {
  SUBCASE("equidistant") {
    const TimePartition part = TimePartition::equidistant(1.0, 2);
    const TemporalMatricesFull full = assemble_temporal_full(part);
    CHECK((full.A_tt - quadrature_oracle_full(part, true, true)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((full.A_t - quadrature_oracle_full(part, true, false)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((full.M_t - quadrature_oracle_full(part, false, false)).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("non-equidistant") {
    const TimePartition part = TimePartition::from_nodes({0.0, 0.3, 0.45, 1.1});
    const TemporalMatricesFull full = assemble_temporal_full(part);
    CHECK((full.A_tt - quadrature_oracle_full(part, true, true)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((full.A_t - quadrature_oracle_full(part, true, false)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((full.M_t - quadrature_oracle_full(part, false, false)).cwiseAbs().maxCoeff() < 1e-13);
    const TemporalMatrices m = assemble_temporal(part);
    CHECK(m.A_tt.rows() == 6);
    CHECK(m.A_tt.cols() == 6);
  }
}

TEST_CASE("restricted matrices are slices of the full assembly") {
  const TimePartition part = TimePartition::equidistant(2.0, 3);
  const TemporalMatricesFull full = assemble_temporal_full(part);
  const TemporalMatrices m = assemble_temporal(part);
  const int n = part.n_dofs();
  CHECK((m.A_tt - full.A_tt.block(0, 1, n, n)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m.initial.a_tt - full.A_tt.block(0, 0, n, 1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m.initial.a_t - full.A_t.block(0, 0, n, 1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m.initial.m_t - full.M_t.block(0, 0, n, 1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("initial columns live on the first element only") {
  const TimePartition part = TimePartition::equidistant(1.5, 4);
  const TemporalInitialColumns cols = initial_row_columns(part);
  for (int ell = 2; ell < part.n_dofs(); ++ell) {
    CHECK(cols.a_tt[ell] == 0.0);
    CHECK(cols.a_t[ell] == 0.0);
    CHECK(cols.m_t[ell] == 0.0);
  }
  // Single element: A_tt[0, kappa=0] = 7/(3T).
  const double T = 0.6;
  const TemporalInitialColumns one = initial_row_columns(TimePartition::equidistant(T, 1));
  CHECK(one.a_tt[0] == doctest::Approx(7.0 / (3.0 * T)).epsilon(1e-14));
}

TEST_CASE("bandwidth of the restricted matrices stays within 4") {
  const TimePartition part = TimePartition::equidistant(1.0, 5);
  const TemporalMatrices m = assemble_temporal(part);
  for (int i = 0; i < m.M_t.rows(); ++i) {
    for (int j = 0; j < m.M_t.cols(); ++j) {
      if (std::abs(i - j) > 4) {
        CHECK(m.M_t(i, j) == 0.0);
        CHECK(m.A_tt(i, j) == 0.0);
        CHECK(m.A_t(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("partition of unity: 1^T M_full 1 = T") {
  for (double T : {1.0, 2.0, std::sqrt(10.4)}) {
    const TimePartition part = TimePartition::equidistant(T, 6);
    const TemporalMatricesFull full = assemble_temporal_full(part);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(full.M_t.rows());
    CHECK(ones.dot(full.M_t * ones) == doctest::Approx(T).epsilon(1e-13));
  }
}

TEST_CASE("integration by parts at matrix level: A_t + A_t^T = boundary terms") {
  const TimePartition part = TimePartition::from_nodes({0.0, 0.4, 1.0, 1.3});
  const TemporalMatricesFull full = assemble_temporal_full(part);
  const int dim = static_cast<int>(full.A_t.rows());
  Eigen::MatrixXd boundary = Eigen::MatrixXd::Zero(dim, dim);
  boundary(dim - 1, dim - 1) = 1.0;  // e(T) e(T)^T
  boundary(0, 0) = -1.0;             // -e(0) e(0)^T
  CHECK((full.A_t + full.A_t.transpose() - boundary).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("v^T A_t u converges to int u' v at second order") {
  const double T = 1.0;
  auto u = [](double t) { return std::sin(M_PI * t / 2.0); };       // u(0) = 0
  auto v = [](double t) { return std::cos(M_PI * t / 2.0); };       // v(T) = 0
  const double exact = M_PI / 4.0;                                  // int_0^1 u' v dt
  std::vector<double> errors;
  for (int n : {8, 16, 32}) {
    const TimePartition part = TimePartition::equidistant(T, n);
    const TemporalMatrices m = assemble_temporal(part);
    Eigen::VectorXd uu(part.n_dofs()), vv(part.n_dofs());
    for (int kappa = 1; kappa <= part.n_dofs(); ++kappa) uu[kappa - 1] = u(part.quad_node_time(kappa));
    for (int ell = 0; ell < part.n_dofs(); ++ell) vv[ell] = v(part.quad_node_time(ell));
    errors.push_back(std::abs(vv.dot(m.A_t * uu) - exact));
  }
  CHECK(errors[0] / errors[1] > 3.5);
  CHECK(errors[1] / errors[2] > 3.5);
}
