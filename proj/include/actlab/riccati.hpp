#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "actlab/model.hpp"
#include "actlab/numkit.hpp"
#include "actlab/parallel.hpp"

namespace actlab {

struct CareProblem {
  DenseMatrix A;
  DenseMatrix B;
  DenseMatrix Q;
  DenseMatrix R;

  CareProblem(DenseMatrix a, DenseMatrix b, DenseMatrix q, DenseMatrix r);
};

struct RiccatiSolution {
  DenseMatrix Pi;
  double residual_fro = 0.0;
  std::size_t newton_iterations = 0;

  RiccatiSolution() : Pi(1, 1) {}
};

// Solves F^T X + X F + C = 0 by vectorizing to an n^2 x n^2 linear system.
// X is symmetrized on return. Throws SingularLyapunov when the Kronecker sum
// is singular (an eigenvalue pairing lambda_i + lambda_j = 0).
DenseMatrix solve_lyapunov(const DenseMatrix& f, const DenseMatrix& c);

// Newton-Kleinman: K_0 = initial_gain (default 0, valid when A is Hurwitz);
// X_k solves the Lyapunov equation for the closed loop A - B K_k with
// C = Q + K_k^T R K_k, then K_{k+1} = R^{-1} B^T X_k. Stops when
// ||X_{k+1} - X_k||_fro <= 1e-12 (1 + ||X_k||_fro), capped at 50 iterations.
RiccatiSolution solve_care(const CareProblem& p,
                           const std::optional<DenseMatrix>& initial_gain = std::nullopt);

double exact_value(const RiccatiSolution& sol, const DenseVector& z0);

// Largest eigenvalue of Pi and its unit eigenvector: the worst-case value
// over the unit sphere and the initial condition realizing it.
std::pair<double, DenseVector> worst_case_value(const RiccatiSolution& sol);

DenseMatrix feedback_gain(const RiccatiSolution& sol, const DenseMatrix& b, const DenseMatrix& r);

// Lyapunov stability test on A - B K: true iff the solve succeeds and the
// solution is PSD. Internal failures map to false.
bool is_closed_loop_stable(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& k);

// One ARE solve per grid point, written into the result by index so the
// output is identical for either execution policy.
std::vector<RiccatiSolution> solve_care_grid(const LtiSystem& sys,
                                             const std::vector<DenseVector>& r_points,
                                             Exec exec = Exec::serial);

}  // namespace actlab
