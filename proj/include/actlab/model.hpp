#pragma once

#include <functional>

#include "actlab/numkit.hpp"

namespace actlab {

// Galerkin discretization of the 1D heat-control problem on [0, pi] over the
// sine basis phi_i(x) = sin(i x). Actuators are indicator patches of length
// 2*delta*pi centered at the design coordinates r.
struct HeatModelConfig {
  std::size_t n = 3;       // mode count
  std::size_t m = 1;       // actuator count
  double delta = 0.005;    // patch half-width factor; patch length 2*delta*pi
  bool stable_sign = true; // A = -M^{-1}K (default) vs A = K M^{-1} as printed

  void validate() const;
};

// Assembled plant: dynamics A, LQR weights Q, R, and the map r -> B(r).
struct LtiSystem {
  DenseMatrix A;
  DenseMatrix Q;
  DenseMatrix R;
  std::function<DenseMatrix(const DenseVector&)> input_map;
  std::size_t n = 0;
  std::size_t m = 0;

  LtiSystem() : A(1, 1), Q(1, 1), R(1, 1) {}
};

// K_ij = integral of phi_i' phi_j' over [0, pi]; diagonal i^2 * pi/2.
DenseMatrix stiffness_matrix(std::size_t n);

// M_ij = integral of phi_i phi_j; (pi/2) * I.
DenseMatrix mass_matrix(std::size_t n);

// B_{il} = integral of sin(i x) over [r_l - delta*pi, r_l + delta*pi]
//        = (2/i) sin(i r_l) sin(i delta pi).
// The formal bounds are used even when the patch overhangs a domain end.
DenseMatrix input_matrix(const DenseVector& r, const HeatModelConfig& cfg);

LtiSystem assemble_system(const HeatModelConfig& cfg);

}  // namespace actlab
