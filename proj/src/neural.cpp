#include "actlab/neural.hpp"

#include <cmath>

#include "actlab/errors.hpp"

namespace actlab {

std::string to_string(Activation a) { return a == Activation::relu ? "relu" : "softplus"; }

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "softplus") return Activation::softplus;
  throw ConfigError("unknown activation: " + s);
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double softplus_deriv(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double relu(double t) { return t > 0.0 ? t : 0.0; }

double relu_deriv(double t) { return t > 0.0 ? 1.0 : 0.0; }

Mlp::Mlp(std::size_t input, std::size_t hidden, Activation act)
    : input_dim(input),
      hidden_width(hidden),
      W1(hidden, input, 0.0),
      b1(hidden, 0.0),
      w2(hidden, 0.0),
      activation(act) {
  if (input < 1 || hidden < 1) throw InvalidArgument("Mlp: dimensions must be >= 1");
}

Mlp make_mlp(std::size_t input_dim, std::size_t hidden_width, Activation act, Rng& rng) {
  Mlp net(input_dim, hidden_width, act);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden_width));
  for (double& v : net.W1.entries()) v = rng.uniform(-bound1, bound1);
  for (std::size_t i = 0; i < hidden_width; ++i) net.b1[i] = rng.uniform(-bound1, bound1);
  for (std::size_t i = 0; i < hidden_width; ++i) net.w2[i] = rng.uniform(-bound2, bound2);
  net.b2 = rng.uniform(-bound2, bound2);
  return net;
}

MlpGrads::MlpGrads(const Mlp& net)
    : W1(net.hidden_width, net.input_dim, 0.0), b1(net.hidden_width, 0.0), w2(net.hidden_width, 0.0) {}

void MlpGrads::set_zero() {
  for (double& v : W1.entries()) v = 0.0;
  for (double& v : b1.entries()) v = 0.0;
  for (double& v : w2.entries()) v = 0.0;
  b2 = 0.0;
}

double mlp_forward_ws(const Mlp& net, const double* x, MlpWorkspace& ws) {
  const std::size_t h = net.hidden_width;
  const std::size_t d = net.input_dim;
  ws.pre.resize(h);
  ws.act.resize(h);
  const double* w1 = net.W1.data();
  double out = net.b2;
  if (net.activation == Activation::relu) {
    for (std::size_t i = 0; i < h; ++i) {
      double acc = net.b1[i];
      const double* row = w1 + i * d;
      for (std::size_t j = 0; j < d; ++j) acc += row[j] * x[j];
      ws.pre[i] = acc;
      const double a = relu(acc);
      ws.act[i] = a;
      out += net.w2[i] * a;
    }
  } else {
    for (std::size_t i = 0; i < h; ++i) {
      double acc = net.b1[i];
      const double* row = w1 + i * d;
      for (std::size_t j = 0; j < d; ++j) acc += row[j] * x[j];
      ws.pre[i] = acc;
      const double a = softplus(acc);
      ws.act[i] = a;
      out += net.w2[i] * a;
    }
  }
  return out;
}

double mlp_forward(const Mlp& net, const DenseVector& x) {
  if (x.dim() != net.input_dim) throw DimensionMismatch("mlp_forward: input dimension mismatch");
  MlpWorkspace ws;
  return mlp_forward_ws(net, x.data(), ws);
}

void mlp_backward_accumulate(const Mlp& net, const double* x, double upstream,
                             const MlpWorkspace& ws, MlpGrads& acc) {
  const std::size_t h = net.hidden_width;
  const std::size_t d = net.input_dim;
  double* gW1 = acc.W1.entries().data();
  const bool use_relu = net.activation == Activation::relu;
  for (std::size_t i = 0; i < h; ++i) {
    const double dact = use_relu ? relu_deriv(ws.pre[i]) : softplus_deriv(ws.pre[i]);
    const double gp = upstream * net.w2[i] * dact;  // d loss / d pre_i
    acc.b1[i] += gp;
    acc.w2[i] += upstream * ws.act[i];
    if (gp != 0.0) {
      double* row = gW1 + i * d;
      for (std::size_t j = 0; j < d; ++j) row[j] += gp * x[j];
    }
  }
  acc.b2 += upstream;
}

MlpGrads mlp_grad_params(const Mlp& net, const DenseVector& x, double upstream) {
  if (x.dim() != net.input_dim) throw DimensionMismatch("mlp_grad_params: input dimension mismatch");
  MlpWorkspace ws;
  mlp_forward_ws(net, x.data(), ws);
  MlpGrads g(net);
  mlp_backward_accumulate(net, x.data(), upstream, ws, g);
  return g;
}

void mlp_grad_input_ws(const Mlp& net, const MlpWorkspace& ws, double* out) {
  const std::size_t h = net.hidden_width;
  const std::size_t d = net.input_dim;
  const double* w1 = net.W1.data();
  const bool use_relu = net.activation == Activation::relu;
  for (std::size_t j = 0; j < d; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < h; ++i) {
    const double dact = use_relu ? relu_deriv(ws.pre[i]) : softplus_deriv(ws.pre[i]);
    const double c = net.w2[i] * dact;
    if (c == 0.0) continue;
    const double* row = w1 + i * d;
    for (std::size_t j = 0; j < d; ++j) out[j] += c * row[j];
  }
}

DenseVector mlp_grad_input(const Mlp& net, const DenseVector& x) {
  if (x.dim() != net.input_dim) throw DimensionMismatch("mlp_grad_input: input dimension mismatch");
  MlpWorkspace ws;
  mlp_forward_ws(net, x.data(), ws);
  DenseVector g(net.input_dim, 0.0);
  mlp_grad_input_ws(net, ws, g.data());
  return g;
}

AdamState::AdamState(const Mlp& net, double lr)
    : first_moment(net), second_moment(net), learning_rate(lr) {}

namespace {

void adam_update_span(double* p, const double* g, double* m, double* v, std::size_t count,
                      double lr, double beta1, double beta2, double eps, double bc1, double bc2) {
  for (std::size_t i = 0; i < count; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace

void adam_step(Mlp& net, const MlpGrads& grads, AdamState& state) {
  if (grads.W1.rows() != net.hidden_width || grads.W1.cols() != net.input_dim ||
      grads.b1.dim() != net.hidden_width || grads.w2.dim() != net.hidden_width ||
      state.first_moment.W1.rows() != net.hidden_width ||
      state.first_moment.W1.cols() != net.input_dim)
    throw ShapeMismatch("adam_step: gradient or moment shapes do not match the network");

  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  adam_update_span(net.W1.entries().data(), grads.W1.data(), state.first_moment.W1.entries().data(),
                   state.second_moment.W1.entries().data(), net.W1.entries().size(),
                   state.learning_rate, state.beta1, state.beta2, state.eps_adam, bc1, bc2);
  adam_update_span(net.b1.data(), grads.b1.data(), state.first_moment.b1.data(),
                   state.second_moment.b1.data(), net.b1.dim(), state.learning_rate, state.beta1,
                   state.beta2, state.eps_adam, bc1, bc2);
  adam_update_span(net.w2.data(), grads.w2.data(), state.first_moment.w2.data(),
                   state.second_moment.w2.data(), net.w2.dim(), state.learning_rate, state.beta1,
                   state.beta2, state.eps_adam, bc1, bc2);
  adam_update_span(&net.b2, &grads.b2, &state.first_moment.b2, &state.second_moment.b2, 1,
                   state.learning_rate, state.beta1, state.beta2, state.eps_adam, bc1, bc2);
}

}  // namespace actlab
