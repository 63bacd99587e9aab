#include <doctest.h>

#include <cmath>

#include <actlab/errors.hpp>
#include <actlab/neural.hpp>
#include <actlab/rng.hpp>

#include "test_helpers.hpp"

using namespace actlab;

namespace {

// Flattened parameter access in the fixed draw order.
double* param_at(Mlp& net, std::size_t idx) {
  const std::size_t w1 = net.hidden_width * net.input_dim;
  if (idx < w1) return &net.W1.entries()[idx];
  idx -= w1;
  if (idx < net.hidden_width) return &net.b1[idx];
  idx -= net.hidden_width;
  if (idx < net.hidden_width) return &net.w2[idx];
  return &net.b2;
}

double grad_at(const MlpGrads& g, std::size_t idx, const Mlp& net) {
  const std::size_t w1 = net.hidden_width * net.input_dim;
  if (idx < w1) return g.W1.entries()[idx];
  idx -= w1;
  if (idx < net.hidden_width) return g.b1[idx];
  idx -= net.hidden_width;
  if (idx < net.hidden_width) return g.w2[idx];
  return g.b2;
}

}  // namespace

TEST_CASE("activation primitives") {
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(softplus(800.0) == 800.0);  // no overflow
  CHECK(softplus(-800.0) == 0.0);   // underflow flushes cleanly
  CHECK(softplus_deriv(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(softplus_deriv(40.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(relu(-2.0) == 0.0);
  CHECK(relu(3.0) == 3.0);
  CHECK(relu_deriv(0.0) == 0.0);  // subgradient pinned at 0
  CHECK(relu_deriv(1e-300) == 1.0);
  CHECK(activation_from_string("softplus") == Activation::softplus);
  CHECK(to_string(Activation::relu) == "relu");
  CHECK_THROWS_AS(activation_from_string("tanh"), ConfigError);
}

TEST_CASE("forward pass references") {
  // Pre-activations (-1, 2) under relu with unit output weights -> 2.
  Mlp net(1, 2, Activation::relu);
  net.W1(0, 0) = -1.0;
  net.W1(1, 0) = 2.0;
  net.w2[0] = 1.0;
  net.w2[1] = 1.0;
  CHECK(mlp_forward(net, DenseVector{1.0}) == 2.0);

  // Zero parameters: output is b2; unit output weights add hidden * ln 2.
  Mlp zero(3, 4, Activation::softplus);
  zero.b2 = 0.75;
  CHECK(mlp_forward(zero, DenseVector{1.0, -2.0, 0.5}) == 0.75);
  for (auto& w : zero.w2.entries()) w = 1.0;
  CHECK(mlp_forward(zero, DenseVector{1.0, -2.0, 0.5}) ==
        doctest::Approx(0.75 + 4.0 * std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("seeded init is deterministic and bounded") {
  Rng a(7);
  Rng b(7);
  const Mlp na = make_mlp(5, 16, Activation::softplus, a);
  const Mlp nb = make_mlp(5, 16, Activation::softplus, b);
  CHECK(na.W1.entries() == nb.W1.entries());
  CHECK(na.b1.entries() == nb.b1.entries());
  CHECK(na.w2.entries() == nb.w2.entries());
  CHECK(na.b2 == nb.b2);

  const double in_bound = 1.0 / std::sqrt(5.0);
  for (double w : na.W1.entries()) CHECK(std::abs(w) <= in_bound);
  for (double w : na.b1.entries()) CHECK(std::abs(w) <= in_bound);
  const double hid_bound = 1.0 / std::sqrt(16.0);
  for (double w : na.w2.entries()) CHECK(std::abs(w) <= hid_bound);
  CHECK(std::abs(na.b2) <= hid_bound);

  Rng c(8);
  const Mlp nc = make_mlp(5, 16, Activation::softplus, c);
  CHECK(na.W1.entries() != nc.W1.entries());
}

TEST_CASE("parameter gradients match central differences") {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    Mlp net = make_mlp(3, 5, Activation::softplus, rng);
    const DenseVector x = testkit::random_vector(rng, 3);
    const double upstream = rng.uniform(-2.0, 2.0);
    const MlpGrads g = mlp_grad_params(net, x, upstream);
    const std::size_t count = net.parameter_count();
    for (std::size_t idx = 0; idx < count; ++idx) {
      const double h = 1e-6;
      double* p = param_at(net, idx);
      const double saved = *p;
      *p = saved + h;
      const double up = mlp_forward(net, x);
      *p = saved - h;
      const double dn = mlp_forward(net, x);
      *p = saved;
      const double fd = upstream * (up - dn) / (2.0 * h);
      CHECK(std::abs(grad_at(g, idx, net) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
    }
  }
}

TEST_CASE("input gradients match central differences") {
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const Mlp net = make_mlp(4, 6, Activation::softplus, rng);
    DenseVector x = testkit::random_vector(rng, 4);
    const DenseVector g = mlp_grad_input(net, x);
    for (std::size_t i = 0; i < 4; ++i) {
      const double h = 1e-6;
      const double saved = x[i];
      x[i] = saved + h;
      const double up = mlp_forward(net, x);
      x[i] = saved - h;
      const double dn = mlp_forward(net, x);
      x[i] = saved;
      const double fd = (up - dn) / (2.0 * h);
      CHECK(std::abs(g[i] - fd) <= 1e-6 * (1.0 + std::abs(fd)));
    }
  }
}

TEST_CASE("relu dead units carry no gradient") {
  Mlp net(1, 1, Activation::relu);
  net.W1(0, 0) = 0.0;
  net.b1[0] = 0.0;  // pre-activation exactly 0
  net.w2[0] = 5.0;
  const MlpGrads g = mlp_grad_params(net, DenseVector{2.0}, 1.0);
  CHECK(g.b1[0] == 0.0);
  CHECK(g.W1(0, 0) == 0.0);
  CHECK(g.w2[0] == 0.0);  // act(0) = 0
  CHECK(g.b2 == 1.0);     // d f / d b2 = upstream
  CHECK(mlp_grad_input(net, DenseVector{2.0})[0] == 0.0);
}

TEST_CASE("workspace fast paths agree with the plain paths") {
  Rng rng(54);
  const Mlp net = make_mlp(4, 8, Activation::softplus, rng);
  const DenseVector x = testkit::random_vector(rng, 4);
  MlpWorkspace ws;
  const double fw = mlp_forward_ws(net, x.data(), ws);
  CHECK(fw == mlp_forward(net, x));

  MlpGrads acc(net);
  acc.set_zero();
  mlp_backward_accumulate(net, x.data(), 1.25, ws, acc);
  const MlpGrads ref = mlp_grad_params(net, x, 1.25);
  CHECK(acc.W1.entries() == ref.W1.entries());
  CHECK(acc.b1.entries() == ref.b1.entries());
  CHECK(acc.w2.entries() == ref.w2.entries());
  CHECK(acc.b2 == ref.b2);

  DenseVector gi(4);
  mlp_grad_input_ws(net, ws, gi.data());
  const DenseVector gref = mlp_grad_input(net, x);
  for (std::size_t i = 0; i < 4; ++i) CHECK(gi[i] == gref[i]);
}

TEST_CASE("lipschitz bound on the forward map") {
  Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const Mlp net = make_mlp(3, 7, trial % 2 ? Activation::relu : Activation::softplus, rng);
    const DenseVector x = testkit::random_vector(rng, 3, -3.0, 3.0);
    const DenseVector y = testkit::random_vector(rng, 3, -3.0, 3.0);
    const double lhs = std::abs(mlp_forward(net, x) - mlp_forward(net, y));
    double w1_fro = 0.0;
    for (double w : net.W1.entries()) w1_fro += w * w;
    const double bound = norm2(net.w2) * std::sqrt(w1_fro) * norm2(x - y);
    CHECK(lhs <= bound + 1e-12);
  }
}

TEST_CASE("adam first step and invariances") {
  Rng rng(56);
  Mlp net = make_mlp(2, 3, Activation::softplus, rng);
  const Mlp before = net;

  // Zero gradient: parameters unchanged, step counter advances.
  AdamState st(net, 1e-3);
  MlpGrads zero(net);
  zero.set_zero();
  adam_step(net, zero, st);
  CHECK(st.step_count == 1);
  CHECK(net.W1.entries() == before.W1.entries());
  CHECK(net.b2 == before.b2);

  // lr = 0 is the identity regardless of gradient.
  AdamState frozen(net, 0.0);
  MlpGrads g(net);
  g.set_zero();
  g.b2 = 3.0;
  adam_step(net, g, frozen);
  CHECK(net.b2 == before.b2);

  // First step with |g| >= 1e-3 moves by about -lr * sign(g).
  for (double mag : {1e-3, 0.1, 7.0}) {
    Mlp fresh = make_mlp(2, 3, Activation::softplus, rng);
    const double b2_start = fresh.b2;
    AdamState s(fresh, 1e-3);
    MlpGrads gg(fresh);
    gg.set_zero();
    gg.b2 = mag;
    adam_step(fresh, gg, s);
    CHECK(std::abs((fresh.b2 - b2_start) + 1e-3) <= 1e-6);
  }
}

TEST_CASE("adam minimizes a simple quadratic") {
  // Loss (b2 - 5)^2 through the gradient interface.
  Mlp net(1, 1, Activation::relu);
  AdamState st(net, 1e-1);
  for (int i = 0; i < 500; ++i) {
    MlpGrads g(net);
    g.set_zero();
    g.b2 = 2.0 * (net.b2 - 5.0);
    adam_step(net, g, st);
  }
  CHECK(std::abs(net.b2 - 5.0) <= 1e-3);
}
