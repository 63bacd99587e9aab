#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "actlab/numkit.hpp"
#include "actlab/parallel.hpp"
#include "actlab/rng.hpp"
#include "actlab/surrogate.hpp"

namespace actlab {

// Objective for max over z0 in the unit ball, min over r in [r_lb, r_ub].
struct SaddleObjective {
  std::function<double(const DenseVector& z0, const DenseVector& r)> eval;
  // Present when the caller wants PGDA; CBO-SP works from eval alone.
  std::function<std::pair<DenseVector, DenseVector>(const DenseVector& z0, const DenseVector& r)>
      grad;
  DenseVector r_lb;
  DenseVector r_ub;
  // Optional: a cheap evaluator in z0 at fixed r, for ensembles that probe
  // many z0 against one r. Falls back to eval when absent.
  std::function<std::function<double(const DenseVector& z0)>(const DenseVector& r)>
      eval_z0_factory;

  SaddleObjective() : r_lb(1), r_ub(1) {}
};

SaddleObjective make_structured_objective(const StructuredSurrogate& s);
SaddleObjective make_unstructured_objective(const UnstructuredSurrogate& s);

DenseVector project_ball(const DenseVector& z);
DenseVector project_box(const DenseVector& r, const DenseVector& lb, const DenseVector& ub);

struct PgdaConfig {
  std::size_t K = 2000;
  double eta_r = 3e-4;
  double eta_z0 = 1e-3;
  DenseVector z0_init;
  DenseVector r_init;

  PgdaConfig() : z0_init(1), r_init(1) {}
  void validate() const;
};

struct SaddleHistoryEntry {
  std::size_t iter = 0;
  DenseVector r;
  DenseVector z0;
  double value = 0.0;

  SaddleHistoryEntry() : r(1), z0(1) {}
};

struct PgdaResult {
  DenseVector z0;
  DenseVector r;
  std::vector<SaddleHistoryEntry> history;

  PgdaResult() : z0(1), r(1) {}
};

// Simultaneous projected ascent in z0 and descent in r, both gradients
// evaluated at the current pair.
PgdaResult pgda(const SaddleObjective& obj, const PgdaConfig& cfg);

// Adds mu * (-| ||z0|| - 1 | + sum_l ([r - r_ub]_+ + [r_lb - r]_+)_l) to the
// value: the maximizer pays for leaving the sphere, the minimizer for
// leaving the box. Gradient is not carried over.
SaddleObjective penalized_objective(const SaddleObjective& obj, double mu);

struct CboConfig {
  std::size_t N1 = 300;  // r-ensemble
  std::size_t N2 = 300;  // z0-ensemble
  double lambda1 = 2.0;
  double lambda2 = 0.1;
  double sigma1 = 2.0;
  double sigma2 = 2.0;
  double alpha = 1e15;
  double beta = 1e15;
  double dt = 0.01;
  double mu = 1e4;
  std::size_t K = 2000;
  DenseVector init_mean_r;
  DenseVector init_mean_z0;
  double init_stddev = 1.224744871391589;  // sqrt(1.5)
  std::uint64_t seed = 0;
  bool early_stop = false;  // off when reproducing fixed-K runs
  Exec exec = Exec::serial;

  CboConfig() : init_mean_r(1), init_mean_z0(1) {}
  void validate() const;
};

struct ParticleEnsembles {
  std::vector<DenseVector> r_particles;
  std::vector<DenseVector> z0_particles;
  DenseVector consensus_r;
  DenseVector consensus_z0;

  ParticleEnsembles() : consensus_r(1), consensus_z0(1) {}
};

// Weighted ensemble averages against the opposite ensemble's plain mean.
// Weights are exponentials of extremum-shifted values; with alpha, beta at
// the default 1e15 the consensus acts as a best-particle selector.
std::pair<DenseVector, DenseVector> consensus_points(const ParticleEnsembles& ens,
                                                     const SaddleObjective& obj, double alpha,
                                                     double beta);

// Euler-Maruyama move of both ensembles toward the stored (pre-step)
// consensus, then consensus refresh. Each particle draws from its own
// stream, so thread scheduling cannot change the result.
void cbo_sp_step(ParticleEnsembles& ens, const SaddleObjective& obj, const CboConfig& cfg,
                 std::vector<Rng>& r_streams, std::vector<Rng>& z0_streams);

struct CboResult {
  DenseVector z0;
  DenseVector r;
  std::vector<SaddleHistoryEntry> history;
  std::size_t iterations = 0;

  CboResult() : z0(1), r(1) {}
};

// Full solver: Gaussian particle init, penalized objective, K iterations of
// consensus + move. History records the consensus pair and the raw
// (unpenalized) objective value there.
CboResult cbo_sp(const SaddleObjective& obj, const CboConfig& cfg);

}  // namespace actlab
