#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "actlab/errors.hpp"

namespace actlab {

// Dense real matrix, row-major storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> init);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::vector<double>& entries() noexcept { return data_; }
  const std::vector<double>& entries() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Dense real vector.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim, double fill = 0.0);
  DenseVector(std::initializer_list<double> init);

  std::size_t dim() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::vector<double>& entries() noexcept { return data_; }
  const std::vector<double>& entries() const noexcept { return data_; }

 private:
  std::vector<double> data_;
};

// Eigendecomposition of a symmetric matrix. Column k of eigenvectors pairs
// with eigenvalues[k]; eigenvalues are sorted in descending order.
struct SymEigenResult {
  DenseVector eigenvalues;
  DenseMatrix eigenvectors;
};

// Elementwise and product arithmetic. All operations validate dimensions and
// throw DimensionMismatch on disagreement.
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);
DenseVector operator*(const DenseMatrix& a, const DenseVector& x);
DenseVector operator+(const DenseVector& a, const DenseVector& b);
DenseVector operator-(const DenseVector& a, const DenseVector& b);
DenseVector operator*(double s, const DenseVector& a);

DenseMatrix transpose(const DenseMatrix& a);
double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& a);
double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);

// Symmetry predicate: max_ij |A_ij - A_ji| <= 1e-12 * (1 + max_ij |A_ij|).
bool is_symmetric(const DenseMatrix& a);

// Solves A x = b by LU factorization with partial pivoting. Throws
// SingularMatrix when a pivot magnitude falls below 1e-14 * ||A||_fro.
DenseVector lu_solve(const DenseMatrix& a, const DenseVector& b);

// Multi-right-hand-side variant; solves A X = B column by column from a
// single factorization.
DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b);

// Classical Cholesky factorization A = L L^T with L lower-triangular and a
// strictly positive diagonal. Throws NotPositiveDefinite when a diagonal
// pivot is <= 0 and NotSymmetric when the symmetry predicate fails.
DenseMatrix cholesky_lower(const DenseMatrix& a);

// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Sweeps until the off-diagonal Frobenius mass drops below
// 1e-12 * ||A||_fro; throws NoConvergence after 100 sweeps and NotSymmetric
// when the symmetry predicate fails.
SymEigenResult sym_eigen(const DenseMatrix& a);

// Serialization fragments: full double precision (17 significant digits),
// row-major entry order.
std::string format_full(double v);
std::string csv_fragment(const DenseMatrix& a);
std::string csv_fragment(const DenseVector& a);

}  // namespace actlab
