#include "stwave/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace stwave {

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  if (rows < 0 || cols < 0) throw DimensionError("from_triplets: negative dimension");
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw DimensionError("from_triplets: index out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());

  std::size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      const int c = triplets[i].col;
      double v = 0.0;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
        v += triplets[i].value;
        ++i;
      }
      if (v != 0.0) {
        m.col_idx_.push_back(c);
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[r + 1] = static_cast<std::int64_t>(m.col_idx_.size());
  }
  return m;
}

CsrMatrix CsrMatrix::from_dense(const Eigen::MatrixXd& dense, double drop_tol) {
  std::vector<Triplet> trip;
  for (int i = 0; i < dense.rows(); ++i) {
    for (int j = 0; j < dense.cols(); ++j) {
      if (std::abs(dense(i, j)) > drop_tol) trip.push_back({i, j, dense(i, j)});
    }
  }
  return from_triplets(static_cast<int>(dense.rows()), static_cast<int>(dense.cols()),
                       std::move(trip));
}

CsrMatrix CsrMatrix::identity(int n) {
  std::vector<Triplet> trip;
  trip.reserve(n);
  for (int i = 0; i < n; ++i) trip.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(trip));
}

double CsrMatrix::coeff(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionError("coeff: out of range");
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  }
  return d;
}

CsrMatrix CsrMatrix::scaled(double s) const {
  CsrMatrix m = *this;
  if (s == 0.0) return CsrMatrix::from_triplets(rows_, cols_, {});
  for (auto& v : m.values_) v *= s;
  return m;
}

CsrMatrix CsrMatrix::transposed() const {
  std::vector<Triplet> trip;
  trip.reserve(values_.size());
  for (int i = 0; i < rows_; ++i) {
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      trip.push_back({col_idx_[k], i, values_[k]});
    }
  }
  return from_triplets(cols_, rows_, std::move(trip));
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("add: shape mismatch");
  CsrMatrix m;
  m.rows_ = a.rows_;
  m.cols_ = a.cols_;
  m.row_ptr_.assign(a.rows_ + 1, 0);
  m.col_idx_.reserve(a.col_idx_.size() + b.col_idx_.size());
  m.values_.reserve(a.values_.size() + b.values_.size());
  for (int r = 0; r < a.rows_; ++r) {
    std::int64_t ia = a.row_ptr_[r], ib = b.row_ptr_[r];
    const std::int64_t ea = a.row_ptr_[r + 1], eb = b.row_ptr_[r + 1];
    while (ia < ea || ib < eb) {
      int col;
      double v;
      if (ib >= eb || (ia < ea && a.col_idx_[ia] < b.col_idx_[ib])) {
        col = a.col_idx_[ia];
        v = a.values_[ia++];
      } else if (ia >= ea || b.col_idx_[ib] < a.col_idx_[ia]) {
        col = b.col_idx_[ib];
        v = b.values_[ib++];
      } else {
        col = a.col_idx_[ia];
        v = a.values_[ia++] + b.values_[ib++];
      }
      if (v != 0.0) {
        m.col_idx_.push_back(col);
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[r + 1] = static_cast<std::int64_t>(m.col_idx_.size());
  }
  return m;
}

CsrMatrix kron(const Eigen::MatrixXd& a, const CsrMatrix& b) {
  const std::int64_t rows = static_cast<std::int64_t>(a.rows()) * b.rows_;
  const std::int64_t cols = static_cast<std::int64_t>(a.cols()) * b.cols_;
  if (rows > std::numeric_limits<int>::max() || cols > std::numeric_limits<int>::max()) {
    throw CapacityError("kron: result dimension overflow");
  }
  CsrMatrix m;
  m.rows_ = static_cast<int>(rows);
  m.cols_ = static_cast<int>(cols);
  m.row_ptr_.assign(m.rows_ + 1, 0);

  std::int64_t nnz_a = 0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) nnz_a += a(i, j) != 0.0 ? 1 : 0;
  }
  m.col_idx_.reserve(static_cast<std::size_t>(nnz_a * b.nnz()));
  m.values_.reserve(static_cast<std::size_t>(nnz_a * b.nnz()));
  for (int ia = 0; ia < a.rows(); ++ia) {
    for (int ib = 0; ib < b.rows_; ++ib) {
      for (int ja = 0; ja < a.cols(); ++ja) {
        const double av = a(ia, ja);
        if (av == 0.0) continue;
        const std::int64_t base = static_cast<std::int64_t>(ja) * b.cols_;
        for (std::int64_t k = b.row_ptr_[ib]; k < b.row_ptr_[ib + 1]; ++k) {
          const double v = av * b.values_[k];
          if (v == 0.0) continue;
          m.col_idx_.push_back(static_cast<int>(base + b.col_idx_[k]));
          m.values_.push_back(v);
        }
      }
      m.row_ptr_[static_cast<std::int64_t>(ia) * b.rows_ + ib + 1] =
          static_cast<std::int64_t>(m.col_idx_.size());
    }
  }
  return m;
}

CsrMatrix kron(const CsrMatrix& a, const CsrMatrix& b) {
  return kron(a.to_dense(), b);
}

Eigen::VectorXd matvec(const CsrMatrix& k, const Eigen::VectorXd& x) {
  if (x.size() != k.cols()) throw DimensionError("matvec: length mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(k.rows());
  const auto& rp = k.row_ptr();
  const auto& ci = k.col_idx();
  const auto& v = k.values();
  for (int i = 0; i < k.rows(); ++i) {
    double s = 0.0;
    for (std::int64_t p = rp[i]; p < rp[i + 1]; ++p) s += v[p] * x[ci[p]];
    y[i] = s;
  }
  return y;
}

Eigen::VectorXd dense_lu_solve(Eigen::MatrixXd a, Eigen::VectorXd b) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw DimensionError("dense_lu_solve: matrix not square");
  if (b.size() != n) throw DimensionError("dense_lu_solve: rhs length mismatch");

  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, a.row(i).cwiseAbs().maxCoeff());
  const double tiny = scale * n * std::numeric_limits<double>::epsilon();

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best <= tiny) throw SingularMatrixError("dense_lu_solve: singular pivot");
    if (piv != k) {
      a.row(piv).swap(a.row(k));
      std::swap(b[piv], b[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      a(i, k) = 0.0;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Eigen::VectorXd x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

struct SparseLu::Impl {
  Eigen::SparseMatrix<double> mat;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

SparseLu::SparseLu(const CsrMatrix& k) : impl_(std::make_unique<Impl>()), n_(k.rows()) {
  if (k.rows() != k.cols()) throw DimensionError("SparseLu: matrix not square");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(k.nnz()));
  const auto& rp = k.row_ptr();
  for (int i = 0; i < k.rows(); ++i) {
    for (std::int64_t p = rp[i]; p < rp[i + 1]; ++p) {
      trip.emplace_back(i, k.col_idx()[p], k.values()[p]);
    }
  }
  impl_->mat.resize(k.rows(), k.cols());
  impl_->mat.setFromTriplets(trip.begin(), trip.end());
  impl_->mat.makeCompressed();
  impl_->lu.analyzePattern(impl_->mat);
  impl_->lu.factorize(impl_->mat);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularMatrixError("SparseLu: factorization failed (singular or numerically singular)");
  }
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

Eigen::VectorXd SparseLu::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != n_) throw DimensionError("SparseLu::solve: rhs length mismatch");
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success) throw SingularMatrixError("SparseLu::solve failed");
  // One refinement step; cheap relative to the factorization.
  Eigen::VectorXd r = rhs - impl_->mat * x;
  x += impl_->lu.solve(r);
  return x;
}

struct SparseCholesky::Impl {
  Eigen::SparseMatrix<double> mat;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

SparseCholesky::SparseCholesky(const CsrMatrix& k) : impl_(std::make_unique<Impl>()), n_(k.rows()) {
  if (k.rows() != k.cols()) throw DimensionError("SparseCholesky: matrix not square");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(k.nnz()));
  const auto& rp = k.row_ptr();
  for (int i = 0; i < k.rows(); ++i) {
    for (std::int64_t p = rp[i]; p < rp[i + 1]; ++p) {
      trip.emplace_back(i, k.col_idx()[p], k.values()[p]);
    }
  }
  impl_->mat.resize(k.rows(), k.cols());
  impl_->mat.setFromTriplets(trip.begin(), trip.end());
  impl_->mat.makeCompressed();
  impl_->llt.compute(impl_->mat);
  if (impl_->llt.info() != Eigen::Success) {
    throw SingularMatrixError("SparseCholesky: factorization failed (matrix not SPD?)");
  }
}

SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

Eigen::VectorXd SparseCholesky::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != n_) throw DimensionError("SparseCholesky::solve: rhs length mismatch");
  return impl_->llt.solve(rhs);
}

Eigen::VectorXd sparse_solve(const CsrMatrix& k, const Eigen::VectorXd& rhs) {
  if (k.rows() != k.cols()) throw DimensionError("sparse_solve: matrix not square");
  if (rhs.size() != k.rows()) throw DimensionError("sparse_solve: rhs length mismatch");
  if (k.rows() <= 64) {
    Eigen::VectorXd x = dense_lu_solve(k.to_dense(), rhs);
    Eigen::VectorXd r = rhs - matvec(k, x);
    x += dense_lu_solve(k.to_dense(), r);
    return x;
  }
  SparseLu lu(k);
  return lu.solve(rhs);
}

void write_coordinate(const CsrMatrix& m, std::ostream& out) {
  char line[80];
  const auto& rp = m.row_ptr();
  for (int i = 0; i < m.rows(); ++i) {
    for (std::int64_t p = rp[i]; p < rp[i + 1]; ++p) {
      std::snprintf(line, sizeof line, "%d %d %.17g\n", i, m.col_idx()[p], m.values()[p]);
      out << line;
    }
  }
}

CsrMatrix read_coordinate(std::istream& in, int rows, int cols) {
  std::vector<Triplet> trip;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Triplet t{};
    if (!(ls >> t.row >> t.col >> t.value)) {
      throw std::invalid_argument("read_coordinate: malformed line: " + line);
    }
    trip.push_back(t);
  }
  return CsrMatrix::from_triplets(rows, cols, std::move(trip));
}

}  // namespace stwave
