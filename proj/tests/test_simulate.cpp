#include <doctest.h>

#include <cmath>

#include <actlab/errors.hpp>
#include <actlab/model.hpp>
#include <actlab/riccati.hpp>
#include <actlab/simulate.hpp>

#include "test_helpers.hpp"

using namespace actlab;

namespace {
double final_norm(const Trajectory& traj) { return norm2(traj.states.back()); }
}  // namespace

TEST_CASE("scalar decay matches the exponential") {
  SimConfig cfg;
  const Trajectory traj = simulate_closed_loop(DenseMatrix({{-1.0}}), DenseMatrix({{0.0}}),
                                               DenseMatrix({{0.0}}), DenseVector{1.0}, cfg);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(traj.states.back()[0] - std::exp(-1.0)) <= 1e-8);
  CHECK(traj.times.size() == 1001);
  CHECK(traj.controls.back()[0] == 0.0);
}

TEST_CASE("rk4 shows fourth-order error decay") {
  const auto err_at = [](double dt) {
    SimConfig cfg;
    cfg.dt = dt;
    const Trajectory traj = simulate_closed_loop(DenseMatrix({{-1.0}}), DenseMatrix({{0.0}}),
                                                 DenseMatrix({{0.0}}), DenseVector{1.0}, cfg);
    return std::abs(traj.states.back()[0] - std::exp(-1.0));
  };
  const double e1 = err_at(0.05);
  const double e2 = err_at(0.025);
  const double ratio = e1 / e2;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("feedback cancelling the dynamics freezes the state") {
  // A = B K: closed loop A - B K = 0.
  const DenseMatrix a({{2.0, 0.0}, {0.0, -3.0}});
  const DenseMatrix b = DenseMatrix::identity(2);
  const DenseMatrix k = a;
  SimConfig cfg;
  const Trajectory traj = simulate_closed_loop(a, b, k, DenseVector{0.4, -0.7}, cfg);
  for (const DenseVector& z : traj.states) {
    CHECK(z[0] == 0.4);
    CHECK(z[1] == -0.7);
  }
  // u = -K z stays constant as well.
  CHECK(traj.controls.back()[0] == doctest::Approx(-0.8).epsilon(1e-15));
}

TEST_CASE("partial final step and record stride") {
  SimConfig cfg;
  cfg.t_final = 0.25;
  cfg.dt = 0.1;  // 2 full steps plus 0.05 remainder
  cfg.record_every = 2;
  const Trajectory traj = simulate_closed_loop(DenseMatrix({{-1.0}}), DenseMatrix({{0.0}}),
                                               DenseMatrix({{0.0}}), DenseVector{1.0}, cfg);
  REQUIRE(traj.times.size() == 3);
  CHECK(traj.times[0] == 0.0);
  CHECK(traj.times[1] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(traj.times[2] == doctest::Approx(0.25).epsilon(1e-15));
  // RK4 local error at dt = 0.1 is ~1e-7 per step
  CHECK(std::abs(traj.states.back()[0] - std::exp(-0.25)) <= 5e-7);
}

TEST_CASE("open-loop heat equation decays mode by mode") {
  HeatModelConfig mcfg;
  mcfg.n = 3;
  mcfg.m = 2;
  const LtiSystem sys = assemble_system(mcfg);
  const DenseMatrix b = sys.input_map(DenseVector{0.0, 0.0});  // B = 0 exactly
  CHECK(frobenius_norm(b) == 0.0);
  SimConfig cfg;
  const Trajectory traj =
      simulate_closed_loop(sys.A, b, DenseMatrix(2, 3, 0.0), DenseVector{1.0, 0.0, 0.0}, cfg);
  CHECK(std::abs(final_norm(traj) - std::exp(-1.0)) <= 1e-6);
}

TEST_CASE("lyapunov function is non-increasing along the closed loop") {
  HeatModelConfig mcfg;
  mcfg.n = 4;
  mcfg.m = 1;
  const LtiSystem sys = assemble_system(mcfg);
  const DenseVector r{1.1};
  const DenseMatrix b = sys.input_map(r);
  const CareProblem p(sys.A, b, sys.Q, sys.R);
  const RiccatiSolution sol = solve_care(p);
  const DenseMatrix k = feedback_gain(sol, b, sys.R);
  REQUIRE(is_closed_loop_stable(sys.A, b, k));
  const DenseMatrix x = solve_lyapunov(sys.A - b * k, DenseMatrix::identity(4));

  SimConfig cfg;
  cfg.record_every = 10;
  const Trajectory traj =
      simulate_closed_loop(sys.A, b, k, DenseVector{0.5, -0.5, 0.5, -0.5}, cfg);
  double prev = 1e300;
  for (const DenseVector& z : traj.states) {
    const double v = dot(z, x * z);
    CHECK(v <= prev + 1e-6 * (1.0 + std::abs(prev)));
    prev = v;
  }
}

TEST_CASE("settling metrics") {
  SimConfig cfg;
  cfg.t_final = 2.0;

  // Scalar e^{-t} against threshold 0.5: settles within one step of ln 2.
  const Trajectory decay = simulate_closed_loop(DenseMatrix({{-1.0}}), DenseMatrix({{0.0}}),
                                                DenseMatrix({{0.0}}), DenseVector{1.0}, cfg);
  const SettlingMetrics m1 = settling_metrics(decay, 0.5);
  REQUIRE(m1.settle_time.has_value());
  CHECK(std::abs(*m1.settle_time - std::log(2.0)) <= 2.0 * cfg.dt);
  CHECK(m1.norms.size() == decay.times.size());

  // Constant zero state settles immediately.
  const Trajectory still = simulate_closed_loop(DenseMatrix({{-1.0}}), DenseMatrix({{0.0}}),
                                                DenseMatrix({{0.0}}), DenseVector{0.0}, cfg);
  const SettlingMetrics m2 = settling_metrics(still, 0.5);
  REQUIRE(m2.settle_time.has_value());
  CHECK(*m2.settle_time == 0.0);

  // Growing state never settles.
  SimConfig grow;
  grow.t_final = 1.0;
  const Trajectory diverge = simulate_closed_loop(DenseMatrix({{1.0}}), DenseMatrix({{0.0}}),
                                                  DenseMatrix({{0.0}}), DenseVector{1.0}, grow);
  CHECK_FALSE(settling_metrics(diverge, 0.5).settle_time.has_value());

  CHECK_THROWS_AS(settling_metrics(decay, 0.0), InvalidArgument);
}

TEST_CASE("non-finite states are detected") {
  SimConfig cfg;
  cfg.t_final = 400.0;
  cfg.dt = 1.0;
  // Explosive scalar plant: RK4 with h = 1 multiplies by about 9.58 per
  // step, overflowing within the horizon.
  CHECK_THROWS_AS(simulate_closed_loop(DenseMatrix({{4.0}}), DenseMatrix({{0.0}}),
                                       DenseMatrix({{0.0}}), DenseVector{1.0}, cfg),
                  NonFiniteState);
}

TEST_CASE("config and dimension validation") {
  SimConfig bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  SimConfig cfg;
  CHECK_THROWS_AS(simulate_closed_loop(DenseMatrix({{-1.0}}), DenseMatrix({{0.0}}),
                                       DenseMatrix({{0.0}}), DenseVector{1.0, 2.0}, cfg),
                  DimensionMismatch);
}
