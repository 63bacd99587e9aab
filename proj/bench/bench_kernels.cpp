// Timing harness for the data-parallel kernels: runs each once per execution
// policy and reports the speedup. Results are checked for bitwise agreement
// so a discrepancy shows up here as well as in the test suite.

#include <chrono>
#include <cstdio>
#include <vector>

#include <actlab/maxmin.hpp>
#include <actlab/model.hpp>
#include <actlab/numkit.hpp>
#include <actlab/parallel.hpp>
#include <actlab/riccati.hpp>
#include <actlab/rng.hpp>
#include <actlab/surrogate.hpp>

using namespace actlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-24s %10.1f ms %10.1f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    HeatModelConfig cfg;
    cfg.n = 10;
    cfg.m = 2;
    const LtiSystem sys = assemble_system(cfg);
    std::vector<DenseVector> grid;
    for (int i = 1; i <= 10; ++i)
      for (int j = 1; j <= 10; ++j)
        grid.push_back(DenseVector{i * kPi / 11.0, j * kPi / 11.0});
    std::vector<RiccatiSolution> a, b;
    const double ts = time_ms([&] { a = solve_care_grid(sys, grid, Exec::serial); });
    const double tp = time_ms([&] { b = solve_care_grid(sys, grid, Exec::parallel); });
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i) same = same && a[i].Pi.entries() == b[i].Pi.entries();
    report("riccati grid 10x10", ts, tp, same);
  }

  {
    HeatModelConfig cfg;
    cfg.n = 3;
    cfg.m = 1;
    const LtiSystem sys = assemble_system(cfg);
    std::vector<double> z0_axis;
    for (int i = 1; i <= 8; ++i) z0_axis.push_back(-1.0 + (i - 1) / 3.5);
    std::vector<double> r_axis;
    for (int i = 1; i <= 99; ++i) r_axis.push_back(i * kPi / 100.0);
    const auto z0_grid = tensor_grid({z0_axis, z0_axis, z0_axis});
    const auto r_grid = tensor_grid({r_axis});
    ValueDataset a, b;
    const double ts = time_ms([&] { a = build_value_dataset(sys, z0_grid, r_grid, Exec::serial); });
    const double tp = time_ms([&] { b = build_value_dataset(sys, z0_grid, r_grid, Exec::parallel); });
    bool same = a.records.size() == b.records.size();
    for (std::size_t i = 0; same && i < a.records.size(); ++i)
      same = a.records[i].target == b.records[i].target;
    report("value dataset 50688", ts, tp, same);
  }

  {
    Rng rng(1);
    const StructuredSurrogate s = make_structured_surrogate(10, 2, 128, Activation::relu, rng);
    const SaddleObjective obj = make_structured_objective(s);
    CboConfig cfg;
    cfg.N1 = 300;
    cfg.N2 = 300;
    cfg.K = 20;
    cfg.seed = 3;
    cfg.init_mean_r = DenseVector{2.5, 2.5};
    cfg.init_mean_z0 = DenseVector(10, 0.5);
    CboResult a, b;
    cfg.exec = Exec::serial;
    const double ts = time_ms([&] { a = cbo_sp(obj, cfg); });
    cfg.exec = Exec::parallel;
    const double tp = time_ms([&] { b = cbo_sp(obj, cfg); });
    bool same = a.history.size() == b.history.size();
    for (std::size_t k = 0; same && k < a.history.size(); ++k)
      same = a.history[k].value == b.history[k].value &&
             a.history[k].r.entries() == b.history[k].r.entries();
    report("cbo-sp 300+300 x 20", ts, tp, same);
  }

  return 0;
}
