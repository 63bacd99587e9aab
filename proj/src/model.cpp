#include "actlab/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "actlab/errors.hpp"

namespace actlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

void HeatModelConfig::validate() const {
  if (n < 1) throw ConfigError("model: n must be >= 1");
  if (m < 1) throw ConfigError("model: m must be >= 1");
  if (!(delta > 0.0 && delta < 0.5)) throw ConfigError("model: delta must lie in (0, 1/2)");
}

DenseMatrix stiffness_matrix(std::size_t n) {
  DenseMatrix k(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double mode = static_cast<double>(i + 1);
    k(i, i) = mode * mode * kPi / 2.0;
  }
  return k;
}

DenseMatrix mass_matrix(std::size_t n) {
  DenseMatrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = kPi / 2.0;
  return m;
}

DenseMatrix input_matrix(const DenseVector& r, const HeatModelConfig& cfg) {
  if (r.dim() != cfg.m) throw DimensionMismatch("input_matrix: r has wrong actuator count");
  for (std::size_t l = 0; l < cfg.m; ++l)
    if (!(r[l] >= 0.0 && r[l] <= kPi))
      throw OutOfDomain("input_matrix: r_" + std::to_string(l + 1) + " = " + format_full(r[l]) +
                        " outside [0, pi]");
  DenseMatrix b(cfg.n, cfg.m, 0.0);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const double mode = static_cast<double>(i + 1);
    const double half_width_term = std::sin(mode * cfg.delta * kPi);
    for (std::size_t l = 0; l < cfg.m; ++l)
      b(i, l) = (2.0 / mode) * std::sin(mode * r[l]) * half_width_term;
  }
  return b;
}

LtiSystem assemble_system(const HeatModelConfig& cfg) {
  cfg.validate();
  LtiSystem sys;
  sys.n = cfg.n;
  sys.m = cfg.m;
  const DenseMatrix k = stiffness_matrix(cfg.n);
  const DenseMatrix m = mass_matrix(cfg.n);
  sys.A = DenseMatrix(cfg.n, cfg.n, 0.0);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const double ratio = k(i, i) / m(i, i);
    sys.A(i, i) = cfg.stable_sign ? -ratio : ratio;
  }
  sys.Q = m;
  sys.R = DenseMatrix::identity(cfg.m);
  sys.input_map = [cfg](const DenseVector& r) { return input_matrix(r, cfg); };
  return sys;
}

}  // namespace actlab
