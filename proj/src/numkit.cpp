#include "actlab/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace actlab {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DimensionMismatch(what);
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw InvalidArgument("DenseMatrix: dimensions must be >= 1");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> init) {
  rows_ = init.size();
  if (rows_ == 0) throw InvalidArgument("DenseMatrix: empty initializer");
  cols_ = init.begin()->size();
  if (cols_ == 0) throw InvalidArgument("DenseMatrix: empty row");
  data_.reserve(rows_ * cols_);
  for (const auto& row : init) {
    if (row.size() != cols_) throw InvalidArgument("DenseMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseVector::DenseVector(std::size_t dim, double fill) : data_(dim, fill) {
  if (dim == 0) throw InvalidArgument("DenseVector: dimension must be >= 1");
}

DenseVector::DenseVector(std::initializer_list<double> init) : data_(init) {
  if (data_.empty()) throw InvalidArgument("DenseVector: empty initializer");
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix add: shape mismatch");
  DenseMatrix r = a;
  for (std::size_t i = 0; i < r.entries().size(); ++i) r.entries()[i] += b.entries()[i];
  return r;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sub: shape mismatch");
  DenseMatrix r = a;
  for (std::size_t i = 0; i < r.entries().size(); ++i) r.entries()[i] -= b.entries()[i];
  return r;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(), "matrix mul: inner dimension mismatch");
  DenseMatrix r(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix r = a;
  for (double& v : r.entries()) v *= s;
  return r;
}

DenseVector operator*(const DenseMatrix& a, const DenseVector& x) {
  require(a.cols() == x.dim(), "matvec: dimension mismatch");
  DenseVector r(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    r[i] = acc;
  }
  return r;
}

DenseVector operator+(const DenseVector& a, const DenseVector& b) {
  require(a.dim() == b.dim(), "vector add: dimension mismatch");
  DenseVector r = a;
  for (std::size_t i = 0; i < r.dim(); ++i) r[i] += b[i];
  return r;
}

DenseVector operator-(const DenseVector& a, const DenseVector& b) {
  require(a.dim() == b.dim(), "vector sub: dimension mismatch");
  DenseVector r = a;
  for (std::size_t i = 0; i < r.dim(); ++i) r[i] -= b[i];
  return r;
}

DenseVector operator*(double s, const DenseVector& a) {
  DenseVector r = a;
  for (std::size_t i = 0; i < r.dim(); ++i) r[i] *= s;
  return r;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix r(a.cols(), a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

double dot(const DenseVector& a, const DenseVector& b) {
  require(a.dim() == b.dim(), "dot: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

double frobenius_norm(const DenseMatrix& a) {
  double acc = 0.0;
  for (double v : a.entries()) acc += v * v;
  return std::sqrt(acc);
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.entries()) m = std::max(m, std::abs(v));
  return m;
}

bool is_symmetric(const DenseMatrix& a) {
  if (a.rows() != a.cols()) return false;
  double skew = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      skew = std::max(skew, std::abs(a(i, j) - a(j, i)));
  return skew <= 1e-12 * (1.0 + max_abs(a));
}

namespace {

// LU factorization with partial pivoting, in place. Returns the row
// permutation; throws SingularMatrix when a pivot falls below the threshold
// tied to the original ||A||_fro.
std::vector<std::size_t> lu_factor(DenseMatrix& a) {
  const std::size_t n = a.rows();
  const double pivot_floor = 1e-14 * frobenius_norm(a);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= pivot_floor)
      throw SingularMatrix("lu_solve: pivot " + std::to_string(best) + " below threshold at column " +
                           std::to_string(k));
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    const double inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a(i, k) * inv;
      a(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return perm;
}

DenseVector lu_apply(const DenseMatrix& lu, const std::vector<std::size_t>& perm, const DenseVector& b) {
  const std::size_t n = lu.rows();
  DenseVector x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (std::size_t i = 1; i < n; ++i) {
    double acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= lu(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= lu(ii, j) * x[j];
    x[ii] = acc / lu(ii, ii);
  }
  return x;
}

}  // namespace

DenseVector lu_solve(const DenseMatrix& a, const DenseVector& b) {
  require(a.rows() == a.cols(), "lu_solve: matrix must be square");
  require(a.rows() == b.dim(), "lu_solve: right-hand side dimension mismatch");
  DenseMatrix lu = a;
  const auto perm = lu_factor(lu);
  return lu_apply(lu, perm, b);
}

DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == a.cols(), "lu_solve: matrix must be square");
  require(a.rows() == b.rows(), "lu_solve: right-hand side row mismatch");
  DenseMatrix lu = a;
  const auto perm = lu_factor(lu);
  DenseMatrix x(b.rows(), b.cols(), 0.0);
  DenseVector col(b.rows(), 0.0);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    const DenseVector xj = lu_apply(lu, perm, col);
    for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = xj[i];
  }
  return x;
}

DenseMatrix cholesky_lower(const DenseMatrix& a) {
  require(a.rows() == a.cols(), "cholesky_lower: matrix must be square");
  if (!is_symmetric(a)) throw NotSymmetric("cholesky_lower: input fails the symmetry predicate");
  const std::size_t n = a.rows();
  DenseMatrix l(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0)
      throw NotPositiveDefinite("cholesky_lower: nonpositive pivot at index " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = a(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / ljj;
    }
  }
  return l;
}

namespace {

double offdiag_norm(const DenseMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) acc += a(i, j) * a(i, j);
  return std::sqrt(acc);
}

}  // namespace

SymEigenResult sym_eigen(const DenseMatrix& a) {
  require(a.rows() == a.cols(), "sym_eigen: matrix must be square");
  if (!is_symmetric(a)) throw NotSymmetric("sym_eigen: input fails the symmetry predicate");
  const std::size_t n = a.rows();
  DenseMatrix work = a;
  DenseMatrix v = DenseMatrix::identity(n);
  const double target = 1e-12 * frobenius_norm(a);

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  while (offdiag_norm(work) > target) {
    if (++sweep > kMaxSweeps) throw NoConvergence("sym_eigen: no convergence after 100 sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = work(p, q);
        if (apq == 0.0) continue;
        const double tau = (work(q, q) - work(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double app = work(p, p);
        const double aqq = work(q, q);
        work(p, p) = app - t * apq;
        work(q, q) = aqq + t * apq;
        work(p, q) = 0.0;
        work(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = work(k, p);
          const double akq = work(k, q);
          work(k, p) = c * akp - s * akq;
          work(p, k) = work(k, p);
          work(k, q) = s * akp + c * akq;
          work(q, k) = work(k, q);
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return work(i, i) > work(j, j); });

  SymEigenResult res;
  res.eigenvalues = DenseVector(n, 0.0);
  res.eigenvectors = DenseMatrix(n, n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    res.eigenvalues[k] = work(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) res.eigenvectors(i, k) = v(i, order[k]);
  }
  return res;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_fragment(const DenseMatrix& a) {
  std::string out;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    if (i) out += ',';
    out += format_full(a.entries()[i]);
  }
  return out;
}

std::string csv_fragment(const DenseVector& a) {
  std::string out;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (i) out += ',';
    out += format_full(a[i]);
  }
  return out;
}

}  // namespace actlab
