#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "actlab/model.hpp"
#include "actlab/neural.hpp"
#include "actlab/numkit.hpp"
#include "actlab/parallel.hpp"
#include "actlab/riccati.hpp"
#include "actlab/rng.hpp"

namespace actlab {

// Training pair for the unstructured surrogate: target = z0' Pi(r) z0.
struct ValueRecord {
  DenseVector z0;
  DenseVector r;
  double target = 0.0;

  ValueRecord() : z0(1), r(1) {}
  ValueRecord(DenseVector z, DenseVector rr, double t)
      : z0(std::move(z)), r(std::move(rr)), target(t) {}
};

struct ValueDataset {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<ValueRecord> records;
};

// Training pair for the structured surrogate.
struct RiccatiRecord {
  DenseVector r;
  DenseMatrix Pi;

  RiccatiRecord() : r(1), Pi(1, 1) {}
  RiccatiRecord(DenseVector rr, DenseMatrix pi) : r(std::move(rr)), Pi(std::move(pi)) {}
};

struct RiccatiDataset {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<RiccatiRecord> records;
};

// Tensor product of per-axis point lists, last axis fastest.
std::vector<DenseVector> tensor_grid(const std::vector<std::vector<double>>& axes);

// Records ordered r-major: for each grid r (one Riccati solve each), every
// z0 in grid order.
ValueDataset build_value_dataset(const LtiSystem& sys, const std::vector<DenseVector>& z0_grid,
                                 const std::vector<DenseVector>& r_grid, Exec exec = Exec::serial);

RiccatiDataset build_riccati_dataset(const LtiSystem& sys, const std::vector<DenseVector>& r_grid,
                                     Exec exec = Exec::serial);

// Scalar net over the concatenated input (z0, r).
struct UnstructuredSurrogate {
  Mlp net;
  std::size_t n = 0;
  std::size_t m = 0;
};

UnstructuredSurrogate make_unstructured_surrogate(std::size_t n, std::size_t m,
                                                  std::size_t hidden_width, Activation act,
                                                  Rng& rng);

// Cholesky-factor net: Pi_theta(r) = L(r) L(r)' with one scalar net per
// lower-triangular entry; diagonal entries pass through softplus and are
// shifted by eps so L is nonsingular by construction.
struct StructuredSurrogate {
  std::size_t n = 0;
  std::size_t m = 0;
  double eps = 1.1920929e-7;
  std::vector<Mlp> entries;  // n(n+1)/2 nets, index (i,j), i >= j, at i(i+1)/2 + j

  static std::size_t entry_index(std::size_t i, std::size_t j) { return i * (i + 1) / 2 + j; }
  std::size_t entry_count() const { return n * (n + 1) / 2; }
};

StructuredSurrogate make_structured_surrogate(std::size_t n, std::size_t m,
                                              std::size_t hidden_width, Activation hidden_act,
                                              Rng& rng);

DenseMatrix assemble_L(const StructuredSurrogate& s, const DenseVector& r);
DenseMatrix pi_theta(const StructuredSurrogate& s, const DenseVector& r);

double value_unstructured(const UnstructuredSurrogate& s, const DenseVector& z0,
                          const DenseVector& r);

// ||L(r)' z0||^2, nonnegative by construction.
double value_structured(const StructuredSurrogate& s, const DenseVector& z0, const DenseVector& r);

// grad_z0 = 2 Pi_theta(r) z0; grad_r via the entry nets' input gradients
// (softplus chain factor on the diagonal).
std::pair<DenseVector, DenseVector> grad_value_structured(const StructuredSurrogate& s,
                                                          const DenseVector& z0,
                                                          const DenseVector& r);

// Input gradient of the net, split into the z0 and r blocks.
std::pair<DenseVector, DenseVector> grad_value_unstructured(const UnstructuredSurrogate& s,
                                                            const DenseVector& z0,
                                                            const DenseVector& r);

struct TrainConfig {
  std::size_t iterations = 1000;
  double learning_rate = 1e-3;
  std::size_t batch = 1024;       // unstructured only; structured is full-batch
  std::size_t record_every = 100; // loss history stride
  std::uint64_t seed = 0;         // mini-batch shuffling
};

struct TrainResult {
  // (iteration, loss): entry 0 is the pre-training loss, then every
  // record_every-th iteration and the final one. Unstructured records the
  // full-dataset MSE; structured records the summed Frobenius loss.
  std::vector<std::pair<std::size_t, double>> loss_history;
  double final_loss = 0.0;
};

TrainResult train_unstructured(UnstructuredSurrogate& s, const ValueDataset& data,
                               const TrainConfig& cfg);
TrainResult train_structured(StructuredSurrogate& s, const RiccatiDataset& data,
                             const TrainConfig& cfg);

// max over the unit sphere of z0' Pi_theta(r) z0 = lambda_max(Pi_theta(r)).
double worst_case_value_theta(const StructuredSurrogate& s, const DenseVector& r);

// The unstructured surrogate has no spectral shortcut; projected gradient
// ascent on the sphere with random multistarts.
struct SphereAscentConfig {
  std::size_t multistarts = 20;
  std::size_t steps = 500;
  double step_size = 1e-2;
};

double worst_case_value_theta(const UnstructuredSurrogate& s, const DenseVector& r,
                              const SphereAscentConfig& cfg, Rng& rng);

}  // namespace actlab
