#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "stwave/errors.hpp"

namespace stwave {

struct Triplet {
  int row, col;
  double value;
};

/// Compressed-row sparse matrix. After construction the column indices within
/// each row are sorted and unique and exact zeros are pruned; instances are
/// immutable afterwards.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
  static CsrMatrix from_dense(const Eigen::MatrixXd& dense, double drop_tol = 0.0);
  static CsrMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry lookup; returns 0 for positions outside the pattern.
  double coeff(int i, int j) const;

  Eigen::MatrixXd to_dense() const;
  CsrMatrix scaled(double s) const;
  CsrMatrix transposed() const;

  friend CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b);
  friend CsrMatrix kron(const Eigen::MatrixXd& a, const CsrMatrix& b);
  friend CsrMatrix kron(const CsrMatrix& a, const CsrMatrix& b);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Entrywise sum; exact zeros produced by cancellation are pruned.
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b);

/// Kronecker product with the first factor as the outer (slow) index:
/// result[(ia*rb + ib), (ja*cb + jb)] = a(ia,ja) * b(ib,jb).
CsrMatrix kron(const Eigen::MatrixXd& a, const CsrMatrix& b);
CsrMatrix kron(const CsrMatrix& a, const CsrMatrix& b);

/// y = K x with deterministic summation order.
Eigen::VectorXd matvec(const CsrMatrix& k, const Eigen::VectorXd& x);

/// Dense LU with partial pivoting (in-house, used as the small-system path).
Eigen::VectorXd dense_lu_solve(Eigen::MatrixXd a, Eigen::VectorXd b);

/// Reusable sparse LU factorization for nonsymmetric indefinite systems.
class SparseLu {
 public:
  explicit SparseLu(const CsrMatrix& k);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  int size() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

/// Reusable Cholesky factorization for symmetric positive definite systems
/// (mass matrices, Gram systems).
class SparseCholesky {
 public:
  explicit SparseCholesky(const CsrMatrix& k);
  ~SparseCholesky();
  SparseCholesky(SparseCholesky&&) noexcept;
  SparseCholesky& operator=(SparseCholesky&&) noexcept;
  SparseCholesky(const SparseCholesky&) = delete;
  SparseCholesky& operator=(const SparseCholesky&) = delete;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  int size() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

/// Direct solve of K x = rhs. Small systems go through the in-house dense LU,
/// larger ones through a sparse LU factorization; one step of iterative
/// refinement keeps the relative residual at or below 1e-8 for reasonably
/// conditioned systems. Throws SingularMatrixError / DimensionError.
Eigen::VectorXd sparse_solve(const CsrMatrix& k, const Eigen::VectorXd& rhs);

/// Text import/export, one "i j value" line per entry, 0-based indices.
void write_coordinate(const CsrMatrix& m, std::ostream& out);
CsrMatrix read_coordinate(std::istream& in, int rows, int cols);

}  // namespace stwave
