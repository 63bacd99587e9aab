#pragma once

#include <string>
#include <vector>

#include "actlab/numkit.hpp"
#include "actlab/rng.hpp"

namespace actlab {

enum class Activation { relu, softplus };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

double softplus(double t);        // overflow-safe: max(t,0) + log1p(e^{-|t|})
double softplus_deriv(double t);  // sigmoid, computed stably
double relu(double t);
double relu_deriv(double t);      // relu'(0) defined as 0

// One-hidden-layer scalar-output perceptron:
//   f(x) = w2' act(W1 x + b1) + b2.
struct Mlp {
  std::size_t input_dim = 0;
  std::size_t hidden_width = 0;
  DenseMatrix W1;  // hidden x input
  DenseVector b1;  // hidden
  DenseVector w2;  // hidden
  double b2 = 0.0;
  Activation activation = Activation::relu;

  Mlp() : W1(1, 1), b1(1), w2(1) {}
  Mlp(std::size_t input, std::size_t hidden, Activation act);

  std::size_t parameter_count() const { return hidden_width * input_dim + 2 * hidden_width + 1; }
};

// Seeded initialization, uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per
// layer. Draw order is fixed (W1 row-major, b1, w2, b2) so a given seed
// always produces the same network.
Mlp make_mlp(std::size_t input_dim, std::size_t hidden_width, Activation act, Rng& rng);

// Gradient record with the same shapes as the Mlp parameters.
struct MlpGrads {
  DenseMatrix W1;
  DenseVector b1;
  DenseVector w2;
  double b2 = 0.0;

  MlpGrads() : W1(1, 1), b1(1), w2(1) {}
  explicit MlpGrads(const Mlp& net);

  void set_zero();
};

// Scratch buffers reused across evaluations to keep training allocation-free.
struct MlpWorkspace {
  std::vector<double> pre;  // W1 x + b1
  std::vector<double> act;  // activation(pre)
};

double mlp_forward(const Mlp& net, const DenseVector& x);

// Forward pass leaving pre/act in the workspace for a later backward call.
double mlp_forward_ws(const Mlp& net, const double* x, MlpWorkspace& ws);

// Accumulates upstream * d f / d theta into acc, reusing the workspace state
// from the matching forward call.
void mlp_backward_accumulate(const Mlp& net, const double* x, double upstream,
                             const MlpWorkspace& ws, MlpGrads& acc);

MlpGrads mlp_grad_params(const Mlp& net, const DenseVector& x, double upstream);

// d f / d x = W1' (act'(pre) .* w2).
DenseVector mlp_grad_input(const Mlp& net, const DenseVector& x);
void mlp_grad_input_ws(const Mlp& net, const MlpWorkspace& ws, double* out);

// Adam with bias correction over one Mlp's parameters.
struct AdamState {
  MlpGrads first_moment;
  MlpGrads second_moment;
  std::size_t step_count = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;

  AdamState() = default;
  explicit AdamState(const Mlp& net, double lr = 1e-3);
};

void adam_step(Mlp& net, const MlpGrads& grads, AdamState& state);

}  // namespace actlab
