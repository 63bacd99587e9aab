#include "actlab/riccati.hpp"

#include <cmath>
#include <string>

#include "actlab/errors.hpp"

namespace actlab {

CareProblem::CareProblem(DenseMatrix a, DenseMatrix b, DenseMatrix q, DenseMatrix r)
    : A(std::move(a)), B(std::move(b)), Q(std::move(q)), R(std::move(r)) {
  if (A.rows() != A.cols()) throw DimensionMismatch("CareProblem: A must be square");
  if (B.rows() != A.rows()) throw DimensionMismatch("CareProblem: B row count must match A");
  if (Q.rows() != A.rows() || Q.cols() != A.cols())
    throw DimensionMismatch("CareProblem: Q must match A");
  if (R.rows() != B.cols() || R.cols() != B.cols())
    throw DimensionMismatch("CareProblem: R must be m x m");
  if (!is_symmetric(Q)) throw NotSymmetric("CareProblem: Q fails the symmetry predicate");
  if (!is_symmetric(R)) throw NotSymmetric("CareProblem: R fails the symmetry predicate");
}

DenseMatrix solve_lyapunov(const DenseMatrix& f, const DenseMatrix& c) {
  if (f.rows() != f.cols()) throw DimensionMismatch("solve_lyapunov: F must be square");
  if (c.rows() != f.rows() || c.cols() != f.cols())
    throw DimensionMismatch("solve_lyapunov: C must match F");
  const std::size_t n = f.rows();

  // vec ordering: unknown X_ij sits at i*n + j. Row (i,j) of the system is
  // sum_k F_ki X_kj + sum_l X_il F_lj = -C_ij.
  DenseMatrix coeff(n * n, n * n, 0.0);
  DenseVector rhs(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t k = 0; k < n; ++k) coeff(row, k * n + j) += f(k, i);
      for (std::size_t l = 0; l < n; ++l) coeff(row, i * n + l) += f(l, j);
      rhs[row] = -c(i, j);
    }
  }

  DenseVector x_vec(n * n, 0.0);
  try {
    x_vec = lu_solve(coeff, rhs);
  } catch (const SingularMatrix& e) {
    throw SingularLyapunov(std::string("solve_lyapunov: singular Kronecker sum (") + e.what() + ")");
  }

  DenseMatrix x(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = x_vec[i * n + j];
  const DenseMatrix xt = transpose(x);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = 0.5 * (x(i, j) + xt(i, j));
  return x;
}

RiccatiSolution solve_care(const CareProblem& p, const std::optional<DenseMatrix>& initial_gain) {
  const std::size_t n = p.A.rows();
  const std::size_t m = p.B.cols();

  DenseMatrix k(m, n, 0.0);
  if (initial_gain) {
    if (initial_gain->rows() != m || initial_gain->cols() != n)
      throw DimensionMismatch("solve_care: initial gain must be m x n");
    k = *initial_gain;
  }

  const DenseMatrix bt = transpose(p.B);
  constexpr std::size_t kMaxNewton = 50;
  DenseMatrix x_prev(n, n, 0.0);
  bool have_prev = false;

  for (std::size_t iter = 1; iter <= kMaxNewton; ++iter) {
    const DenseMatrix closed = p.A - p.B * k;
    const DenseMatrix cost = p.Q + transpose(k) * (p.R * k);
    DenseMatrix x(n, n, 0.0);
    try {
      x = solve_lyapunov(closed, cost);
    } catch (const SingularLyapunov& e) {
      throw NotStabilizable(std::string("solve_care: closed loop not Hurwitz at Newton step ") +
                            std::to_string(iter) + " (" + e.what() + ")");
    }
    if (iter == 1) {
      // A Hurwitz initial loop yields X = integral of e^{F^T t} C e^{F t} dt,
      // which is PSD; an indefinite X means the initial gain does not
      // stabilize.
      const SymEigenResult eig = sym_eigen(x);
      if (eig.eigenvalues[n - 1] < -1e-10 * (1.0 + std::abs(eig.eigenvalues[0])))
        throw NotStabilizable("solve_care: initial closed loop not Hurwitz (indefinite Lyapunov solution)");
    }
    k = lu_solve(p.R, bt * x);
    if (have_prev && frobenius_norm(x - x_prev) <= 1e-12 * (1.0 + frobenius_norm(x_prev))) {
      RiccatiSolution sol;
      sol.Pi = x;
      sol.newton_iterations = iter;
      const DenseMatrix res =
          transpose(p.A) * x + x * p.A - x * (p.B * lu_solve(p.R, bt * x)) + p.Q;
      sol.residual_fro = frobenius_norm(res);
      return sol;
    }
    x_prev = x;
    have_prev = true;
  }
  throw NoConvergence("solve_care: Newton iteration cap (50) reached");
}

double exact_value(const RiccatiSolution& sol, const DenseVector& z0) {
  if (z0.dim() != sol.Pi.rows()) throw DimensionMismatch("exact_value: z0 dimension mismatch");
  return dot(z0, sol.Pi * z0);
}

std::pair<double, DenseVector> worst_case_value(const RiccatiSolution& sol) {
  const SymEigenResult eig = sym_eigen(sol.Pi);
  DenseVector dir(sol.Pi.rows(), 0.0);
  for (std::size_t i = 0; i < dir.dim(); ++i) dir[i] = eig.eigenvectors(i, 0);
  return {eig.eigenvalues[0], dir};
}

DenseMatrix feedback_gain(const RiccatiSolution& sol, const DenseMatrix& b, const DenseMatrix& r) {
  if (b.rows() != sol.Pi.rows()) throw DimensionMismatch("feedback_gain: B row mismatch");
  if (r.rows() != b.cols() || r.cols() != b.cols())
    throw DimensionMismatch("feedback_gain: R must be m x m");
  return lu_solve(r, transpose(b) * sol.Pi);
}

bool is_closed_loop_stable(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& k) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || k.rows() != b.cols() || k.cols() != a.cols())
    return false;
  try {
    const DenseMatrix x = solve_lyapunov(a - b * k, DenseMatrix::identity(a.rows()));
    const SymEigenResult eig = sym_eigen(x);
    const double lam_max = eig.eigenvalues[0];
    const double lam_min = eig.eigenvalues[x.rows() - 1];
    return lam_min >= -1e-10 * (1.0 + std::abs(lam_max)) && lam_max > 0.0;
  } catch (...) {
    return false;
  }
}

std::vector<RiccatiSolution> solve_care_grid(const LtiSystem& sys,
                                             const std::vector<DenseVector>& r_points,
                                             Exec exec) {
  std::vector<RiccatiSolution> out(r_points.size());
  for_each_index(r_points.size(), exec, [&](std::size_t i) {
    // Rethrows keep the error category so the caller's exit-code mapping
    // still sees an out-of-domain placement as a configuration problem.
    const auto msg = [&](const Error& e) {
      return "solve_care_grid: failure at r = (" + csv_fragment(r_points[i]) + "): " + e.what();
    };
    try {
      const CareProblem p(sys.A, sys.input_map(r_points[i]), sys.Q, sys.R);
      out[i] = solve_care(p);
    } catch (const OutOfDomain& e) {
      throw OutOfDomain(msg(e));
    } catch (const DimensionMismatch& e) {
      throw DimensionMismatch(msg(e));
    } catch (const Error& e) {
      throw Error(msg(e));
    }
  });
  return out;
}

}  // namespace actlab
