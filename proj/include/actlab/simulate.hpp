#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "actlab/numkit.hpp"

namespace actlab {

struct SimConfig {
  double t_final = 1.0;
  double dt = 1e-3;
  std::size_t record_every = 1;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DenseVector> states;
  std::vector<DenseVector> controls;  // u = -K_fb z
};

// Classical RK4 with fixed step dt on z' = (A - B K_fb) z. Records every
// record_every-th step plus the final time.
Trajectory simulate_closed_loop(const DenseMatrix& a, const DenseMatrix& b,
                                const DenseMatrix& k_fb, const DenseVector& z0,
                                const SimConfig& cfg);

struct SettlingMetrics {
  // First recorded time after which ||z||_2 stays below the threshold
  // through t_final; empty if it never does.
  std::optional<double> settle_time;
  std::vector<std::pair<double, double>> norms;  // (time, ||z||_2) per record
};

SettlingMetrics settling_metrics(const Trajectory& traj, double threshold);

}  // namespace actlab
