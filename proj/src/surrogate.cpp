#include "actlab/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "actlab/errors.hpp"

namespace actlab {

std::vector<DenseVector> tensor_grid(const std::vector<std::vector<double>>& axes) {
  if (axes.empty()) throw InvalidArgument("tensor_grid: no axes");
  std::size_t total = 1;
  for (const auto& axis : axes) {
    if (axis.empty()) throw InvalidArgument("tensor_grid: empty axis");
    total *= axis.size();
  }
  std::vector<DenseVector> points;
  points.reserve(total);
  DenseVector p(axes.size(), 0.0);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t count = 0; count < total; ++count) {
    for (std::size_t d = 0; d < axes.size(); ++d) p[d] = axes[d][idx[d]];
    points.push_back(p);
    for (std::size_t d = axes.size(); d-- > 0;) {
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
    }
  }
  return points;
}

ValueDataset build_value_dataset(const LtiSystem& sys, const std::vector<DenseVector>& z0_grid,
                                 const std::vector<DenseVector>& r_grid, Exec exec) {
  if (z0_grid.empty() || r_grid.empty()) throw EmptyDataset("build_value_dataset: empty grid");
  const std::vector<RiccatiSolution> sols = solve_care_grid(sys, r_grid, exec);
  ValueDataset data;
  data.n = sys.n;
  data.m = sys.m;
  data.records.reserve(z0_grid.size() * r_grid.size());
  for (std::size_t ri = 0; ri < r_grid.size(); ++ri)
    for (const DenseVector& z0 : z0_grid)
      data.records.emplace_back(z0, r_grid[ri], exact_value(sols[ri], z0));
  return data;
}

RiccatiDataset build_riccati_dataset(const LtiSystem& sys, const std::vector<DenseVector>& r_grid,
                                     Exec exec) {
  if (r_grid.empty()) throw EmptyDataset("build_riccati_dataset: empty grid");
  const std::vector<RiccatiSolution> sols = solve_care_grid(sys, r_grid, exec);
  RiccatiDataset data;
  data.n = sys.n;
  data.m = sys.m;
  data.records.reserve(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i)
    data.records.emplace_back(r_grid[i], sols[i].Pi);
  return data;
}

UnstructuredSurrogate make_unstructured_surrogate(std::size_t n, std::size_t m,
                                                  std::size_t hidden_width, Activation act,
                                                  Rng& rng) {
  UnstructuredSurrogate s;
  s.n = n;
  s.m = m;
  s.net = make_mlp(n + m, hidden_width, act, rng);
  return s;
}

StructuredSurrogate make_structured_surrogate(std::size_t n, std::size_t m,
                                              std::size_t hidden_width, Activation hidden_act,
                                              Rng& rng) {
  StructuredSurrogate s;
  s.n = n;
  s.m = m;
  s.entries.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) s.entries.push_back(make_mlp(m, hidden_width, hidden_act, rng));
  return s;
}

namespace {

// Forward every entry net at r, leaving raw outputs in raw and (optionally)
// the per-entry workspaces primed for backward passes.
void forward_entries(const StructuredSurrogate& s, const double* r, std::vector<double>& raw,
                     std::vector<MlpWorkspace>& ws) {
  const std::size_t count = s.entry_count();
  raw.resize(count);
  ws.resize(count);
  for (std::size_t p = 0; p < count; ++p) raw[p] = mlp_forward_ws(s.entries[p], r, ws[p]);
}

void fill_L(const StructuredSurrogate& s, const std::vector<double>& raw, DenseMatrix& l) {
  const std::size_t n = s.n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      l(i, j) = raw[StructuredSurrogate::entry_index(i, j)];
      l(j, i) = 0.0;
    }
    l(i, i) = softplus(raw[StructuredSurrogate::entry_index(i, i)]) + s.eps;
  }
}

}  // namespace

DenseMatrix assemble_L(const StructuredSurrogate& s, const DenseVector& r) {
  if (r.dim() != s.m) throw DimensionMismatch("assemble_L: r dimension mismatch");
  std::vector<double> raw;
  std::vector<MlpWorkspace> ws;
  forward_entries(s, r.data(), raw, ws);
  DenseMatrix l(s.n, s.n, 0.0);
  fill_L(s, raw, l);
  return l;
}

DenseMatrix pi_theta(const StructuredSurrogate& s, const DenseVector& r) {
  const DenseMatrix l = assemble_L(s, r);
  return l * transpose(l);
}

double value_unstructured(const UnstructuredSurrogate& s, const DenseVector& z0,
                          const DenseVector& r) {
  if (z0.dim() != s.n || r.dim() != s.m)
    throw DimensionMismatch("value_unstructured: input dimension mismatch");
  DenseVector x(s.n + s.m, 0.0);
  for (std::size_t i = 0; i < s.n; ++i) x[i] = z0[i];
  for (std::size_t i = 0; i < s.m; ++i) x[s.n + i] = r[i];
  return mlp_forward(s.net, x);
}

double value_structured(const StructuredSurrogate& s, const DenseVector& z0,
                        const DenseVector& r) {
  if (z0.dim() != s.n) throw DimensionMismatch("value_structured: z0 dimension mismatch");
  const DenseMatrix l = assemble_L(s, r);
  // w = L' z0; value = ||w||^2, nonnegative in exact and floating arithmetic.
  double acc = 0.0;
  for (std::size_t j = 0; j < s.n; ++j) {
    double w = 0.0;
    for (std::size_t i = j; i < s.n; ++i) w += l(i, j) * z0[i];
    acc += w * w;
  }
  return acc;
}

std::pair<DenseVector, DenseVector> grad_value_structured(const StructuredSurrogate& s,
                                                          const DenseVector& z0,
                                                          const DenseVector& r) {
  if (z0.dim() != s.n) throw DimensionMismatch("grad_value_structured: z0 dimension mismatch");
  if (r.dim() != s.m) throw DimensionMismatch("grad_value_structured: r dimension mismatch");
  const std::size_t n = s.n;
  const std::size_t m = s.m;

  std::vector<double> raw;
  std::vector<MlpWorkspace> ws;
  forward_entries(s, r.data(), raw, ws);
  DenseMatrix l(n, n, 0.0);
  fill_L(s, raw, l);

  // w = L' z0
  DenseVector w(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = j; i < n; ++i) acc += l(i, j) * z0[i];
    w[j] = acc;
  }

  // grad_z0 = 2 L w = 2 Pi_theta z0
  DenseVector gz(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += l(i, j) * w[j];
    gz[i] = 2.0 * acc;
  }

  // grad_r_k = 2 sum_{i>=j} z0_i w_j dL_ij/dr_k; the diagonal carries the
  // softplus chain factor evaluated at the raw net output.
  DenseVector gr(m, 0.0);
  std::vector<double> entry_grad(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const std::size_t p = StructuredSurrogate::entry_index(i, j);
      double coeff = 2.0 * z0[i] * w[j];
      if (i == j) coeff *= softplus_deriv(raw[p]);
      if (coeff == 0.0) continue;
      mlp_grad_input_ws(s.entries[p], ws[p], entry_grad.data());
      for (std::size_t k = 0; k < m; ++k) gr[k] += coeff * entry_grad[k];
    }
  }
  return {gz, gr};
}

std::pair<DenseVector, DenseVector> grad_value_unstructured(const UnstructuredSurrogate& s,
                                                            const DenseVector& z0,
                                                            const DenseVector& r) {
  if (z0.dim() != s.n || r.dim() != s.m)
    throw DimensionMismatch("grad_value_unstructured: input dimension mismatch");
  DenseVector x(s.n + s.m, 0.0);
  for (std::size_t i = 0; i < s.n; ++i) x[i] = z0[i];
  for (std::size_t i = 0; i < s.m; ++i) x[s.n + i] = r[i];
  const DenseVector g = mlp_grad_input(s.net, x);
  DenseVector gz(s.n, 0.0);
  DenseVector gr(s.m, 0.0);
  for (std::size_t i = 0; i < s.n; ++i) gz[i] = g[i];
  for (std::size_t i = 0; i < s.m; ++i) gr[i] = g[s.n + i];
  return {gz, gr};
}

namespace {

double full_mse(const Mlp& net, const std::vector<double>& inputs,
                const std::vector<double>& targets, std::size_t input_dim, MlpWorkspace& ws) {
  double acc = 0.0;
  const std::size_t count = targets.size();
  for (std::size_t i = 0; i < count; ++i) {
    const double diff = mlp_forward_ws(net, inputs.data() + i * input_dim, ws) - targets[i];
    acc += diff * diff;
  }
  return acc / static_cast<double>(count);
}

void fisher_yates(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(i));
    std::swap(idx[i - 1], idx[std::min(j, i - 1)]);
  }
}

}  // namespace

TrainResult train_unstructured(UnstructuredSurrogate& s, const ValueDataset& data,
                               const TrainConfig& cfg) {
  if (data.records.empty()) throw EmptyDataset("train_unstructured: no records");
  if (data.n != s.n || data.m != s.m)
    throw DimensionMismatch("train_unstructured: dataset dims do not match the surrogate");
  const std::size_t dim = s.n + s.m;
  const std::size_t count = data.records.size();

  std::vector<double> inputs(count * dim);
  std::vector<double> targets(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ValueRecord& rec = data.records[i];
    double* row = inputs.data() + i * dim;
    for (std::size_t j = 0; j < s.n; ++j) row[j] = rec.z0[j];
    for (std::size_t j = 0; j < s.m; ++j) row[s.n + j] = rec.r[j];
    targets[i] = rec.target;
  }

  const std::size_t batch = std::min<std::size_t>(std::max<std::size_t>(cfg.batch, 1), count);
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  fisher_yates(order, rng);
  std::size_t cursor = 0;

  AdamState adam(s.net, cfg.learning_rate);
  MlpGrads grads(s.net);
  MlpWorkspace ws;
  const std::size_t stride = std::max<std::size_t>(cfg.record_every, 1);

  TrainResult result;
  result.loss_history.emplace_back(0, full_mse(s.net, inputs, targets, dim, ws));

  for (std::size_t iter = 1; iter <= cfg.iterations; ++iter) {
    if (cursor >= count) {
      fisher_yates(order, rng);
      cursor = 0;
    }
    const std::size_t take = std::min(batch, count - cursor);
    grads.set_zero();
    const double scale = 2.0 / static_cast<double>(take);
    for (std::size_t b = 0; b < take; ++b) {
      const std::size_t rec = order[cursor + b];
      const double* x = inputs.data() + rec * dim;
      const double pred = mlp_forward_ws(s.net, x, ws);
      mlp_backward_accumulate(s.net, x, scale * (pred - targets[rec]), ws, grads);
    }
    cursor += take;
    adam_step(s.net, grads, adam);
    if (iter % stride == 0 || iter == cfg.iterations)
      result.loss_history.emplace_back(iter, full_mse(s.net, inputs, targets, dim, ws));
  }
  result.final_loss = result.loss_history.back().second;
  return result;
}

TrainResult train_structured(StructuredSurrogate& s, const RiccatiDataset& data,
                             const TrainConfig& cfg) {
  if (data.records.empty()) throw EmptyDataset("train_structured: no records");
  if (data.n != s.n || data.m != s.m)
    throw DimensionMismatch("train_structured: dataset dims do not match the surrogate");
  const std::size_t n = s.n;
  const std::size_t m = s.m;
  const std::size_t nets = s.entry_count();
  const std::size_t count = data.records.size();

  std::vector<double> r_flat(count * m);
  for (std::size_t i = 0; i < count; ++i) {
    if (data.records[i].r.dim() != m || data.records[i].Pi.rows() != n)
      throw DimensionMismatch("train_structured: record shape mismatch");
    for (std::size_t j = 0; j < m; ++j) r_flat[i * m + j] = data.records[i].r[j];
  }

  std::vector<AdamState> adam;
  std::vector<MlpGrads> grads;
  adam.reserve(nets);
  grads.reserve(nets);
  for (std::size_t p = 0; p < nets; ++p) {
    adam.emplace_back(s.entries[p], cfg.learning_rate);
    grads.emplace_back(s.entries[p]);
  }
  std::vector<MlpWorkspace> ws(nets);
  std::vector<double> raw(nets);
  DenseMatrix l(n, n, 0.0);
  DenseMatrix e(n, n, 0.0);
  const std::size_t stride = std::max<std::size_t>(cfg.record_every, 1);

  TrainResult result;

  // One pass over the dataset: accumulates the summed Frobenius loss and,
  // when train is true, the parameter gradients.
  const auto sweep = [&](bool train) {
    double loss = 0.0;
    for (std::size_t rec = 0; rec < count; ++rec) {
      const double* r = r_flat.data() + rec * m;
      for (std::size_t p = 0; p < nets; ++p) raw[p] = mlp_forward_ws(s.entries[p], r, ws[p]);
      fill_L(s, raw, l);
      const DenseMatrix& pi = data.records[rec].Pi;
      // E = L L' - Pi
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          double acc = 0.0;
          for (std::size_t k = 0; k <= std::min(i, j); ++k) acc += l(i, k) * l(j, k);
          acc -= pi(i, j);
          e(i, j) = acc;
          e(j, i) = acc;
        }
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) loss += e(i, j) * e(i, j);
      if (!train) continue;
      // dloss/dL = 4 E L on the structural nonzeros
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          double g = 0.0;
          for (std::size_t k = j; k < n; ++k) g += e(i, k) * l(k, j);
          g *= 4.0;
          const std::size_t p = StructuredSurrogate::entry_index(i, j);
          if (i == j) g *= softplus_deriv(raw[p]);
          if (g != 0.0) mlp_backward_accumulate(s.entries[p], r, g, ws[p], grads[p]);
        }
      }
    }
    return loss;
  };

  for (std::size_t iter = 1; iter <= cfg.iterations; ++iter) {
    for (std::size_t p = 0; p < nets; ++p) grads[p].set_zero();
    const double loss = sweep(true);
    if (iter == 1 || (iter - 1) % stride == 0) result.loss_history.emplace_back(iter - 1, loss);
    for (std::size_t p = 0; p < nets; ++p) adam_step(s.entries[p], grads[p], adam[p]);
  }
  result.loss_history.emplace_back(cfg.iterations, sweep(false));
  result.final_loss = result.loss_history.back().second;
  return result;
}

double worst_case_value_theta(const StructuredSurrogate& s, const DenseVector& r) {
  const SymEigenResult eig = sym_eigen(pi_theta(s, r));
  return eig.eigenvalues[0];
}

double worst_case_value_theta(const UnstructuredSurrogate& s, const DenseVector& r,
                              const SphereAscentConfig& cfg, Rng& rng) {
  if (r.dim() != s.m) throw DimensionMismatch("worst_case_value_theta: r dimension mismatch");
  const std::size_t n = s.n;
  DenseVector x(n + s.m, 0.0);
  for (std::size_t i = 0; i < s.m; ++i) x[n + i] = r[i];
  MlpWorkspace ws;
  std::vector<double> grad(n + s.m, 0.0);

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t start = 0; start < cfg.multistarts; ++start) {
    DenseVector z(n, 0.0);
    double norm = 0.0;
    while (norm == 0.0) {
      for (std::size_t i = 0; i < n; ++i) z[i] = rng.normal();
      norm = norm2(z);
    }
    for (std::size_t i = 0; i < n; ++i) z[i] /= norm;
    for (std::size_t step = 0; step <= cfg.steps; ++step) {
      for (std::size_t i = 0; i < n; ++i) x[i] = z[i];
      const double value = mlp_forward_ws(s.net, x.data(), ws);
      best = std::max(best, value);
      if (step == cfg.steps) break;
      mlp_grad_input_ws(s.net, ws, grad.data());
      double nn = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        z[i] += cfg.step_size * grad[i];
        nn += z[i] * z[i];
      }
      nn = std::sqrt(nn);
      if (nn > 0.0)
        for (std::size_t i = 0; i < n; ++i) z[i] /= nn;
    }
  }
  return best;
}

}  // namespace actlab
