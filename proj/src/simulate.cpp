#include "actlab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "actlab/errors.hpp"

namespace actlab {

void SimConfig::validate() const {
  if (!(dt > 0.0) || !(t_final >= dt)) throw ConfigError("simulate: need 0 < dt <= t_final");
  if (record_every < 1) throw ConfigError("simulate: record_every must be >= 1");
}

namespace {

void apply(const DenseMatrix& f, const std::vector<double>& x, std::vector<double>& out) {
  const std::size_t n = f.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += f(i, j) * x[j];
    out[i] = acc;
  }
}

}  // namespace

Trajectory simulate_closed_loop(const DenseMatrix& a, const DenseMatrix& b,
                                const DenseMatrix& k_fb, const DenseVector& z0,
                                const SimConfig& cfg) {
  cfg.validate();
  const std::size_t n = a.rows();
  const std::size_t m = b.cols();
  if (a.cols() != n || b.rows() != n || k_fb.rows() != m || k_fb.cols() != n || z0.dim() != n)
    throw DimensionMismatch("simulate_closed_loop: inconsistent dimensions");

  const DenseMatrix f = a - b * k_fb;

  std::vector<double> z(z0.data(), z0.data() + n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

  Trajectory traj;
  const auto record = [&](double t) {
    DenseVector state(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) state[i] = z[i];
    DenseVector u(std::max<std::size_t>(m, 1), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += k_fb(i, j) * z[j];
      u[i] = -acc;
    }
    traj.times.push_back(t);
    traj.states.push_back(state);
    traj.controls.push_back(u);
  };

  const auto rk4_step = [&](double h) {
    apply(f, z, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * h * k1[i];
    apply(f, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * h * k2[i];
    apply(f, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + h * k3[i];
    apply(f, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      z[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };

  record(0.0);
  const std::size_t full_steps = static_cast<std::size_t>(std::floor(cfg.t_final / cfg.dt + 1e-12));
  double t = 0.0;
  for (std::size_t step = 1; step <= full_steps; ++step) {
    rk4_step(cfg.dt);
    t = static_cast<double>(step) * cfg.dt;
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(z[i]))
        throw NonFiniteState("simulate_closed_loop: non-finite state at t = " + format_full(t));
    if (step % cfg.record_every == 0) record(t);
  }
  // Partial step up to t_final when dt does not divide it.
  if (cfg.t_final - t > 1e-12 * cfg.t_final) {
    rk4_step(cfg.t_final - t);
    t = cfg.t_final;
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(z[i]))
        throw NonFiniteState("simulate_closed_loop: non-finite state at t = " + format_full(t));
  }
  if (traj.times.back() != t) record(t);
  return traj;
}

SettlingMetrics settling_metrics(const Trajectory& traj, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgument("settling_metrics: threshold must be positive");
  SettlingMetrics out;
  out.norms.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    out.norms.emplace_back(traj.times[i], norm2(traj.states[i]));

  // Scan backwards for the last sample at or above the threshold.
  std::size_t last_bad = traj.times.size();
  for (std::size_t i = traj.times.size(); i-- > 0;) {
    if (out.norms[i].second >= threshold) {
      last_bad = i;
      break;
    }
  }
  if (last_bad == traj.times.size()) {
    out.settle_time = traj.times.empty() ? std::optional<double>{} : std::optional<double>{traj.times.front()};
  } else if (last_bad + 1 < traj.times.size()) {
    out.settle_time = traj.times[last_bad + 1];
  }
  return out;
}

}  // namespace actlab
