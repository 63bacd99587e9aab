#include "actlab/maxmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "actlab/errors.hpp"

namespace actlab {

namespace {
constexpr double kPi = std::numbers::pi;

bool all_finite(const DenseVector& v) {
  for (std::size_t i = 0; i < v.dim(); ++i)
    if (!std::isfinite(v[i])) return false;
  return true;
}
}  // namespace

SaddleObjective make_structured_objective(const StructuredSurrogate& s) {
  SaddleObjective obj;
  obj.eval = [&s](const DenseVector& z0, const DenseVector& r) {
    return value_structured(s, z0, r);
  };
  obj.grad = [&s](const DenseVector& z0, const DenseVector& r) {
    return grad_value_structured(s, z0, r);
  };
  obj.r_lb = DenseVector(s.m, 0.0);
  obj.r_ub = DenseVector(s.m, kPi);
  obj.eval_z0_factory = [&s](const DenseVector& r) {
    const DenseMatrix l = assemble_L(s, r);
    const std::size_t n = s.n;
    return [l, n](const DenseVector& z0) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double w = 0.0;
        for (std::size_t i = j; i < n; ++i) w += l(i, j) * z0[i];
        acc += w * w;
      }
      return acc;
    };
  };
  return obj;
}

SaddleObjective make_unstructured_objective(const UnstructuredSurrogate& s) {
  SaddleObjective obj;
  obj.eval = [&s](const DenseVector& z0, const DenseVector& r) {
    return value_unstructured(s, z0, r);
  };
  obj.grad = [&s](const DenseVector& z0, const DenseVector& r) {
    return grad_value_unstructured(s, z0, r);
  };
  obj.r_lb = DenseVector(s.m, 0.0);
  obj.r_ub = DenseVector(s.m, kPi);
  return obj;
}

DenseVector project_ball(const DenseVector& z) {
  const double norm = norm2(z);
  if (norm <= 1.0) return z;
  return (1.0 / norm) * z;
}

DenseVector project_box(const DenseVector& r, const DenseVector& lb, const DenseVector& ub) {
  if (r.dim() != lb.dim() || r.dim() != ub.dim())
    throw DimensionMismatch("project_box: bound dimension mismatch");
  DenseVector out = r;
  for (std::size_t i = 0; i < out.dim(); ++i) out[i] = std::max(lb[i], std::min(ub[i], out[i]));
  return out;
}

void PgdaConfig::validate() const {
  if (K < 1) throw ConfigError("pgda: K must be >= 1");
  if (!(eta_r > 0.0) || !(eta_z0 > 0.0)) throw ConfigError("pgda: step sizes must be positive");
}

PgdaResult pgda(const SaddleObjective& obj, const PgdaConfig& cfg) {
  cfg.validate();
  if (!obj.grad) throw InvalidArgument("pgda: objective provides no gradient");
  DenseVector z0 = project_ball(cfg.z0_init);
  DenseVector r = project_box(cfg.r_init, obj.r_lb, obj.r_ub);

  PgdaResult result;
  result.history.reserve(cfg.K + 1);
  SaddleHistoryEntry entry;
  entry.iter = 0;
  entry.r = r;
  entry.z0 = z0;
  entry.value = obj.eval(z0, r);
  result.history.push_back(entry);

  for (std::size_t k = 0; k < cfg.K; ++k) {
    const auto [gz, gr] = obj.grad(z0, r);
    z0 = project_ball(z0 + cfg.eta_z0 * gz);
    r = project_box(r - cfg.eta_r * gr, obj.r_lb, obj.r_ub);
    if (!all_finite(z0) || !all_finite(r))
      throw NonFiniteIterate("pgda: non-finite iterate at iteration " + std::to_string(k + 1));
    entry.iter = k + 1;
    entry.r = r;
    entry.z0 = z0;
    entry.value = obj.eval(z0, r);
    result.history.push_back(entry);
  }
  result.z0 = z0;
  result.r = r;
  return result;
}

SaddleObjective penalized_objective(const SaddleObjective& obj, double mu) {
  if (!(mu > 0.0)) throw InvalidArgument("penalized_objective: mu must be positive");
  SaddleObjective pen;
  pen.r_lb = obj.r_lb;
  pen.r_ub = obj.r_ub;
  const DenseVector lb = obj.r_lb;
  const DenseVector ub = obj.r_ub;

  const auto box_penalty = [lb, ub](const DenseVector& r) {
    double acc = 0.0;
    for (std::size_t l = 0; l < r.dim(); ++l)
      acc += std::max(r[l] - ub[l], 0.0) + std::max(lb[l] - r[l], 0.0);
    return acc;
  };

  const auto base_eval = obj.eval;
  pen.eval = [base_eval, box_penalty, mu](const DenseVector& z0, const DenseVector& r) {
    return base_eval(z0, r) + mu * (-std::abs(norm2(z0) - 1.0) + box_penalty(r));
  };

  const auto base_factory = obj.eval_z0_factory;
  pen.eval_z0_factory = [base_eval, base_factory, box_penalty,
                         mu](const DenseVector& r) -> std::function<double(const DenseVector&)> {
    const double r_term = mu * box_penalty(r);
    if (base_factory) {
      const auto inner = base_factory(r);
      return [inner, r_term, mu](const DenseVector& z0) {
        return inner(z0) + r_term - mu * std::abs(norm2(z0) - 1.0);
      };
    }
    const DenseVector r_copy = r;
    return [base_eval, r_copy, r_term, mu](const DenseVector& z0) {
      return base_eval(z0, r_copy) + r_term - mu * std::abs(norm2(z0) - 1.0);
    };
  };
  return pen;
}

void CboConfig::validate() const {
  if (N1 < 1 || N2 < 1) throw ConfigError("cbo: ensemble sizes must be >= 1");
  if (lambda1 < 0.0 || lambda2 < 0.0) throw ConfigError("cbo: drift rates must be >= 0");
  if (sigma1 < 0.0 || sigma2 < 0.0) throw ConfigError("cbo: diffusion scales must be >= 0");
  if (!(dt > 0.0)) throw ConfigError("cbo: dt must be positive");
  if (alpha < 0.0 || beta < 0.0) throw ConfigError("cbo: weight sharpness must be >= 0");
  if (!(mu > 0.0)) throw ConfigError("cbo: penalty weight must be positive");
  if (K < 1) throw ConfigError("cbo: K must be >= 1");
  if (!(init_stddev >= 0.0)) throw ConfigError("cbo: init_stddev must be >= 0");
}

std::pair<DenseVector, DenseVector> consensus_points(const ParticleEnsembles& ens,
                                                     const SaddleObjective& obj, double alpha,
                                                     double beta) {
  const std::size_t n1 = ens.r_particles.size();
  const std::size_t n2 = ens.z0_particles.size();
  if (n1 == 0 || n2 == 0) throw InvalidArgument("consensus_points: empty ensemble");
  const std::size_t m = ens.r_particles[0].dim();
  const std::size_t n = ens.z0_particles[0].dim();

  DenseVector mean_z0(n, 0.0);
  for (const DenseVector& z : ens.z0_particles) mean_z0 = mean_z0 + z;
  mean_z0 = (1.0 / static_cast<double>(n2)) * mean_z0;
  DenseVector mean_r(m, 0.0);
  for (const DenseVector& r : ens.r_particles) mean_r = mean_r + r;
  mean_r = (1.0 / static_cast<double>(n1)) * mean_r;

  std::vector<double> vals_r(n1);
  for (std::size_t i = 0; i < n1; ++i) vals_r[i] = obj.eval(mean_z0, ens.r_particles[i]);
  std::vector<double> vals_z(n2);
  if (obj.eval_z0_factory) {
    const auto fixed_r = obj.eval_z0_factory(mean_r);
    for (std::size_t i = 0; i < n2; ++i) vals_z[i] = fixed_r(ens.z0_particles[i]);
  } else {
    for (std::size_t i = 0; i < n2; ++i) vals_z[i] = obj.eval(ens.z0_particles[i], mean_r);
  }
  for (double v : vals_r)
    if (!std::isfinite(v)) throw NonFiniteWeight("consensus_points: non-finite value in r-ensemble");
  for (double v : vals_z)
    if (!std::isfinite(v)) throw NonFiniteWeight("consensus_points: non-finite value in z0-ensemble");

  // Extremum shift before exponentiation: mandatory at weights like
  // alpha = beta = 1e15, where raw exp would under/overflow.
  const double vmin = *std::min_element(vals_r.begin(), vals_r.end());
  DenseVector consensus_r(m, 0.0);
  double wsum = 0.0;
  for (std::size_t i = 0; i < n1; ++i) {
    const double w = std::exp(-alpha * (vals_r[i] - vmin));
    wsum += w;
    for (std::size_t l = 0; l < m; ++l) consensus_r[l] += w * ens.r_particles[i][l];
  }
  if (!(wsum > 0.0) || !std::isfinite(wsum))
    throw NonFiniteWeight("consensus_points: degenerate r-ensemble weights");
  consensus_r = (1.0 / wsum) * consensus_r;

  const double vmax = *std::max_element(vals_z.begin(), vals_z.end());
  DenseVector consensus_z0(n, 0.0);
  double vsum = 0.0;
  for (std::size_t i = 0; i < n2; ++i) {
    const double w = std::exp(beta * (vals_z[i] - vmax));
    vsum += w;
    for (std::size_t l = 0; l < n; ++l) consensus_z0[l] += w * ens.z0_particles[i][l];
  }
  if (!(vsum > 0.0) || !std::isfinite(vsum))
    throw NonFiniteWeight("consensus_points: degenerate z0-ensemble weights");
  consensus_z0 = (1.0 / vsum) * consensus_z0;

  return {consensus_r, consensus_z0};
}

namespace {

void move_ensemble(std::vector<DenseVector>& particles, const DenseVector& consensus,
                   double lambda, double sigma, double dt, std::vector<Rng>& streams, Exec exec,
                   const char* label) {
  const double sqrt_dt = std::sqrt(dt);
  for_each_index(particles.size(), exec, [&](std::size_t i) {
    DenseVector& p = particles[i];
    for (std::size_t l = 0; l < p.dim(); ++l) {
      const double nu = p[l] - consensus[l];
      const double dw = sqrt_dt * streams[i].normal();
      p[l] += -lambda * dt * nu + sigma * nu * dw;
    }
    if (!all_finite(p))
      throw NonFiniteIterate(std::string("cbo_sp_step: non-finite ") + label + " particle " +
                             std::to_string(i));
  });
}

}  // namespace

void cbo_sp_step(ParticleEnsembles& ens, const SaddleObjective& obj, const CboConfig& cfg,
                 std::vector<Rng>& r_streams, std::vector<Rng>& z0_streams) {
  if (r_streams.size() != ens.r_particles.size() || z0_streams.size() != ens.z0_particles.size())
    throw InvalidArgument("cbo_sp_step: stream count does not match ensembles");
  // Both ensembles move against the pre-step consensus.
  move_ensemble(ens.r_particles, ens.consensus_r, cfg.lambda1, cfg.sigma1, cfg.dt, r_streams,
                cfg.exec, "r");
  move_ensemble(ens.z0_particles, ens.consensus_z0, cfg.lambda2, cfg.sigma2, cfg.dt, z0_streams,
                cfg.exec, "z0");
  const auto [cr, cz] = consensus_points(ens, obj, cfg.alpha, cfg.beta);
  ens.consensus_r = cr;
  ens.consensus_z0 = cz;
}

CboResult cbo_sp(const SaddleObjective& obj, const CboConfig& cfg) {
  cfg.validate();
  const std::size_t m = cfg.init_mean_r.dim();
  const std::size_t n = cfg.init_mean_z0.dim();
  if (obj.r_lb.dim() != m || obj.r_ub.dim() != m)
    throw DimensionMismatch("cbo_sp: bounds do not match init_mean_r");

  const SaddleObjective pen = penalized_objective(obj, cfg.mu);

  std::vector<Rng> r_streams;
  std::vector<Rng> z0_streams;
  r_streams.reserve(cfg.N1);
  z0_streams.reserve(cfg.N2);
  for (std::size_t i = 0; i < cfg.N1; ++i) r_streams.emplace_back(derive_stream_seed(cfg.seed, 0, i));
  for (std::size_t i = 0; i < cfg.N2; ++i) z0_streams.emplace_back(derive_stream_seed(cfg.seed, 1, i));

  ParticleEnsembles ens;
  ens.r_particles.assign(cfg.N1, DenseVector(m, 0.0));
  ens.z0_particles.assign(cfg.N2, DenseVector(n, 0.0));
  for (std::size_t i = 0; i < cfg.N1; ++i)
    for (std::size_t l = 0; l < m; ++l)
      ens.r_particles[i][l] = cfg.init_mean_r[l] + cfg.init_stddev * r_streams[i].normal();
  for (std::size_t i = 0; i < cfg.N2; ++i)
    for (std::size_t l = 0; l < n; ++l)
      ens.z0_particles[i][l] = cfg.init_mean_z0[l] + cfg.init_stddev * z0_streams[i].normal();

  const auto [cr0, cz0] = consensus_points(ens, pen, cfg.alpha, cfg.beta);
  ens.consensus_r = cr0;
  ens.consensus_z0 = cz0;

  CboResult result;
  result.history.reserve(cfg.K + 1);
  SaddleHistoryEntry entry;
  entry.iter = 0;
  entry.r = ens.consensus_r;
  entry.z0 = ens.consensus_z0;
  entry.value = obj.eval(ens.consensus_z0, ens.consensus_r);
  result.history.push_back(entry);

  constexpr double kMoveTol = 1e-8;
  constexpr std::size_t kStallLimit = 50;
  std::size_t stall = 0;
  std::size_t done = 0;
  for (std::size_t k = 1; k <= cfg.K; ++k) {
    const DenseVector prev_r = ens.consensus_r;
    const DenseVector prev_z0 = ens.consensus_z0;
    cbo_sp_step(ens, pen, cfg, r_streams, z0_streams);
    done = k;
    entry.iter = k;
    entry.r = ens.consensus_r;
    entry.z0 = ens.consensus_z0;
    entry.value = obj.eval(ens.consensus_z0, ens.consensus_r);
    result.history.push_back(entry);
    if (cfg.early_stop) {
      const double moved =
          std::max(norm2(ens.consensus_r - prev_r), norm2(ens.consensus_z0 - prev_z0));
      stall = moved < kMoveTol ? stall + 1 : 0;
      if (stall >= kStallLimit) break;
    }
  }
  result.z0 = ens.consensus_z0;
  result.r = ens.consensus_r;
  result.iterations = done;
  return result;
}

}  // namespace actlab
