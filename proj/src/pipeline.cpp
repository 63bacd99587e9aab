#include "actlab/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "actlab/errors.hpp"
#include "actlab/io.hpp"
#include "actlab/maxmin.hpp"
#include "actlab/model.hpp"
#include "actlab/neural.hpp"
#include "actlab/parallel.hpp"
#include "actlab/riccati.hpp"
#include "actlab/rng.hpp"
#include "actlab/simulate.hpp"
#include "actlab/surrogate.hpp"

namespace actlab {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

const json& require_section(const json& root, const char* name) {
  const auto it = root.find(name);
  if (it == root.end() || !it->is_object())
    throw ConfigError(std::string("config: missing section '") + name + "'");
  return *it;
}

template <typename T>
T require_field(const json& sec, const char* key) {
  const auto it = sec.find(key);
  if (it == sec.end()) throw ConfigError(std::string("config: missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
  }
}

template <typename T>
T field_or(const json& sec, const char* key, T fallback) {
  const auto it = sec.find(key);
  if (it == sec.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
  }
}

DenseVector parse_vector(const json& v, std::size_t dim, const char* what) {
  DenseVector out(dim, 0.0);
  if (v.is_number()) {
    const double x = v.get<double>();
    for (std::size_t i = 0; i < dim; ++i) out[i] = x;
    return out;
  }
  if (!v.is_array() || v.size() != dim)
    throw ConfigError(std::string("config: ") + what + " must be a number or an array of length " +
                      std::to_string(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    if (!v[i].is_number()) throw ConfigError(std::string("config: ") + what + " entries must be numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

std::vector<double> parse_axis(const json& axis) {
  if (!axis.is_object()) throw ConfigError("config: grid axis must be an object");
  if (axis.contains("points")) {
    const auto& pts = axis["points"];
    if (!pts.is_array() || pts.empty()) throw ConfigError("config: grid points must be a nonempty array");
    std::vector<double> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
      if (!p.is_number()) throw ConfigError("config: grid points must be numbers");
      out.push_back(p.get<double>());
    }
    return out;
  }
  if (axis.contains("linspace")) {
    const auto& ls = axis["linspace"];
    const double start = require_field<double>(ls, "start");
    const double stop = require_field<double>(ls, "stop");
    const std::size_t count = require_field<std::size_t>(ls, "count");
    if (count < 1) throw ConfigError("config: linspace count must be >= 1");
    std::vector<double> out(count);
    if (count == 1) {
      out[0] = start;
    } else {
      const double step = (stop - start) / static_cast<double>(count - 1);
      for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
    }
    return out;
  }
  if (axis.contains("pi_interior")) {
    // {i pi / (N+1), i = 1..N}: N interior points of (0, pi).
    const std::size_t count = require_field<std::size_t>(axis, "pi_interior");
    if (count < 1) throw ConfigError("config: pi_interior count must be >= 1");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
      out[i] = static_cast<double>(i + 1) * kPi / static_cast<double>(count + 1);
    return out;
  }
  if (axis.contains("pi_closed")) {
    // {(i-1) pi / (N-1), i = 1..N}: N points including both endpoints.
    const std::size_t count = require_field<std::size_t>(axis, "pi_closed");
    if (count < 2) throw ConfigError("config: pi_closed count must be >= 2");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
      out[i] = static_cast<double>(i) * kPi / static_cast<double>(count - 1);
    return out;
  }
  throw ConfigError("config: grid axis needs one of points, linspace, pi_interior, pi_closed");
}

std::vector<DenseVector> parse_grid(const json& spec, std::size_t dims) {
  std::vector<std::vector<double>> axes;
  if (spec.is_object() && spec.contains("axes")) {
    const auto& ax = spec["axes"];
    if (!ax.is_array() || ax.size() != dims)
      throw ConfigError("config: grid axes must list exactly " + std::to_string(dims) + " axes");
    for (const auto& a : ax) axes.push_back(parse_axis(a));
  } else {
    const std::vector<double> axis = parse_axis(spec);
    axes.assign(dims, axis);
  }
  return tensor_grid(axes);
}

HeatModelConfig parse_model(const json& root) {
  const json& sec = require_section(root, "model");
  HeatModelConfig cfg;
  cfg.n = require_field<std::size_t>(sec, "n");
  cfg.m = require_field<std::size_t>(sec, "m");
  cfg.delta = require_field<double>(sec, "delta");
  cfg.stable_sign = field_or<bool>(sec, "stable_sign", true);
  cfg.validate();
  return cfg;
}

struct LoadedConfig {
  json root;
  std::uint64_t master_seed = 0;
  Exec exec = Exec::parallel;
};

LoadedConfig load_config(const PipelineOptions& opts) {
  if (opts.config_path.empty()) throw ConfigError("a --config file is required");
  LoadedConfig cfg;
  try {
    cfg.root = json::parse(read_file(opts.config_path));
  } catch (const json::exception& e) {
    throw ConfigError("config: cannot parse " + opts.config_path + ": " + e.what());
  }
  if (!cfg.root.is_object()) throw ConfigError("config: top level must be an object");
  cfg.master_seed = field_or<std::uint64_t>(cfg.root, "seed", 0);
  if (opts.seed) cfg.master_seed = *opts.seed;
  cfg.exec = field_or<bool>(cfg.root, "parallel", true) ? Exec::parallel : Exec::serial;
  return cfg;
}

class ManifestWriter {
 public:
  ManifestWriter(const PipelineOptions& opts, const LoadedConfig& cfg)
      : start_(Clock::now()), out_path_(opts.out_path) {
    doc_["version"] = kVersion;
    doc_["command"] = opts.command;
    doc_["seed"] = cfg.master_seed;
    doc_["config"] = cfg.root;
    doc_["artifacts"] = json::array();
    doc_["durations_ms"] = json::object();
    doc_["extra"] = json::object();
  }

  void add_artifact(const std::string& path, const std::string& content) {
    write_file_atomic(path, content);
    doc_["artifacts"].push_back(path);
  }

  void duration(const std::string& key, double ms) { doc_["durations_ms"][key] = ms; }
  json& extra() { return doc_["extra"]; }

  void finish() {
    doc_["durations_ms"]["total"] = ms_since(start_);
    if (!out_path_.empty()) write_file_atomic(out_path_ + ".manifest.json", doc_.dump(2) + "\n");
  }

 private:
  Clock::time_point start_;
  std::string out_path_;
  json doc_;
};

void require_out(const PipelineOptions& opts) {
  if (opts.out_path.empty()) throw ConfigError("an --out path is required for this command");
}

void cmd_data(const PipelineOptions& opts, const LoadedConfig& cfg, std::ostream& log) {
  require_out(opts);
  const HeatModelConfig model = parse_model(cfg.root);
  const LtiSystem sys = assemble_system(model);
  const json& sec = require_section(cfg.root, "data");
  const std::string kind = require_field<std::string>(sec, "kind");
  ManifestWriter manifest(opts, cfg);
  const auto t0 = Clock::now();

  if (kind == "riccati") {
    if (!sec.contains("r_grid")) throw ConfigError("config: data.r_grid is required");
    const auto r_grid = parse_grid(sec["r_grid"], model.m);
    const RiccatiDataset data = build_riccati_dataset(sys, r_grid, cfg.exec);
    manifest.duration("solve", ms_since(t0));
    manifest.extra()["records"] = data.records.size();
    manifest.add_artifact(opts.out_path, riccati_dataset_csv(data));
    log << "riccati dataset: " << data.records.size() << " records -> " << opts.out_path << "\n";
  } else if (kind == "value") {
    if (!sec.contains("r_grid") || !sec.contains("z0_grid"))
      throw ConfigError("config: data.z0_grid and data.r_grid are required");
    const auto z0_grid = parse_grid(sec["z0_grid"], model.n);
    const auto r_grid = parse_grid(sec["r_grid"], model.m);
    const ValueDataset data = build_value_dataset(sys, z0_grid, r_grid, cfg.exec);
    manifest.duration("solve", ms_since(t0));
    manifest.extra()["records"] = data.records.size();
    manifest.extra()["distinct_r"] = r_grid.size();
    manifest.add_artifact(opts.out_path, value_dataset_csv(data));
    log << "value dataset: " << data.records.size() << " records (" << r_grid.size()
        << " distinct r) -> " << opts.out_path << "\n";
  } else {
    throw ConfigError("config: data.kind must be 'riccati' or 'value'");
  }
  manifest.finish();
}

TrainConfig parse_train_config(const json& sec, std::uint64_t master_seed) {
  TrainConfig tc;
  tc.iterations = require_field<std::size_t>(sec, "iterations");
  tc.learning_rate = field_or<double>(sec, "learning_rate", 1e-3);
  tc.batch = field_or<std::size_t>(sec, "batch", 1024);
  tc.record_every = field_or<std::size_t>(sec, "record_every", 100);
  tc.seed = derive_seed(master_seed, "train-batch");
  if (tc.learning_rate < 0.0) throw ConfigError("config: train.learning_rate must be >= 0");
  if (tc.batch < 1) throw ConfigError("config: train.batch must be >= 1");
  return tc;
}

void cmd_train(const PipelineOptions& opts, const LoadedConfig& cfg, std::ostream& log) {
  require_out(opts);
  if (opts.data_path.empty()) throw ConfigError("train needs a --data dataset file");
  const HeatModelConfig model = parse_model(cfg.root);
  const json& sec = require_section(cfg.root, "train");
  const std::string kind = require_field<std::string>(sec, "kind");
  const std::size_t hidden = field_or<std::size_t>(sec, "hidden_width", 128);
  const Activation act =
      activation_from_string(field_or<std::string>(sec, "activation", "relu"));
  const TrainConfig tc = parse_train_config(sec, cfg.master_seed);
  Rng init_rng(derive_seed(cfg.master_seed, "train-init"));

  ManifestWriter manifest(opts, cfg);
  const auto t0 = Clock::now();
  const std::string text = read_file(opts.data_path);

  if (kind == "structured") {
    const RiccatiDataset data = parse_riccati_dataset_csv(text);
    if (data.n != model.n || data.m != model.m)
      throw DimensionMismatch("train: dataset is " + std::to_string(data.n) + "x" +
                              std::to_string(data.m) + " but the model section says " +
                              std::to_string(model.n) + "x" + std::to_string(model.m));
    StructuredSurrogate s = make_structured_surrogate(model.n, model.m, hidden, act, init_rng);
    const TrainResult result = train_structured(s, data, tc);
    manifest.duration("train", ms_since(t0));
    manifest.extra()["initial_loss"] = result.loss_history.front().second;
    manifest.extra()["final_loss"] = result.final_loss;
    manifest.add_artifact(opts.out_path, bundle_to_json(s).dump(2) + "\n");
    manifest.add_artifact(opts.out_path + ".loss.csv", loss_history_csv(result.loss_history));
    log << "structured surrogate: loss " << format_full(result.loss_history.front().second)
        << " -> " << format_full(result.final_loss) << " over " << tc.iterations
        << " iterations\n";
  } else if (kind == "unstructured") {
    const ValueDataset data = parse_value_dataset_csv(text);
    if (data.n != model.n || data.m != model.m)
      throw DimensionMismatch("train: dataset is " + std::to_string(data.n) + "x" +
                              std::to_string(data.m) + " but the model section says " +
                              std::to_string(model.n) + "x" + std::to_string(model.m));
    UnstructuredSurrogate s = make_unstructured_surrogate(model.n, model.m, hidden, act, init_rng);
    const TrainResult result = train_unstructured(s, data, tc);
    manifest.duration("train", ms_since(t0));
    manifest.extra()["initial_loss"] = result.loss_history.front().second;
    manifest.extra()["final_loss"] = result.final_loss;
    manifest.add_artifact(opts.out_path, bundle_to_json(s).dump(2) + "\n");
    manifest.add_artifact(opts.out_path + ".loss.csv", loss_history_csv(result.loss_history));
    log << "unstructured surrogate: mse " << format_full(result.loss_history.front().second)
        << " -> " << format_full(result.final_loss) << " over " << tc.iterations
        << " iterations\n";
  } else {
    throw ConfigError("config: train.kind must be 'structured' or 'unstructured'");
  }
  manifest.finish();
}

json solution_json(const DenseVector& z0, const DenseVector& r, double value,
                   const std::string& method, std::size_t iterations) {
  json j;
  j["z0"] = z0.entries();
  j["r"] = r.entries();
  j["value"] = value;
  j["method"] = method;
  j["iterations"] = iterations;
  return j;
}

void cmd_optimize(const PipelineOptions& opts, const LoadedConfig& cfg, std::ostream& log) {
  require_out(opts);
  if (opts.bundle_path.empty()) throw ConfigError("optimize needs a --bundle surrogate file");
  const SurrogateBundle bundle = load_bundle(opts.bundle_path);
  const std::size_t n = std::visit([](const auto& s) { return s.n; }, bundle);
  const std::size_t m = std::visit([](const auto& s) { return s.m; }, bundle);
  SaddleObjective obj;
  if (const auto* s = std::get_if<StructuredSurrogate>(&bundle))
    obj = make_structured_objective(*s);
  else
    obj = make_unstructured_objective(std::get<UnstructuredSurrogate>(bundle));

  const json& sec = require_section(cfg.root, "optimize");
  const std::string method = require_field<std::string>(sec, "method");
  ManifestWriter manifest(opts, cfg);
  const auto t0 = Clock::now();

  if (method == "pgda") {
    PgdaConfig pc;
    pc.K = field_or<std::size_t>(sec, "K", 2000);
    pc.eta_r = field_or<double>(sec, "eta_r", 3e-4);
    pc.eta_z0 = field_or<double>(sec, "eta_z0", 1e-3);
    pc.z0_init = parse_vector(sec.contains("z0_init") ? sec["z0_init"] : json(0.5), n, "optimize.z0_init");
    pc.r_init = parse_vector(sec.contains("r_init") ? sec["r_init"] : json(2.5), m, "optimize.r_init");
    const PgdaResult result = pgda(obj, pc);
    manifest.duration("optimize", ms_since(t0));
    const double value = obj.eval(result.z0, result.r);
    manifest.add_artifact(opts.out_path,
                          solution_json(result.z0, result.r, value, "pgda", pc.K).dump(2) + "\n");
    manifest.add_artifact(opts.out_path + ".history.csv", history_csv(result.history));
    log << "pgda: r = (" << csv_fragment(result.r) << "), value = " << format_full(value) << "\n";
  } else if (method == "cbo") {
    CboConfig cc;
    cc.N1 = field_or<std::size_t>(sec, "N1", 300);
    cc.N2 = field_or<std::size_t>(sec, "N2", 300);
    cc.lambda1 = field_or<double>(sec, "lambda1", 2.0);
    cc.lambda2 = field_or<double>(sec, "lambda2", 0.1);
    cc.sigma1 = field_or<double>(sec, "sigma1", 2.0);
    cc.sigma2 = field_or<double>(sec, "sigma2", 2.0);
    cc.alpha = field_or<double>(sec, "alpha", 1e15);
    cc.beta = field_or<double>(sec, "beta", 1e15);
    cc.dt = field_or<double>(sec, "dt", 0.01);
    cc.mu = field_or<double>(sec, "mu", 1e4);
    cc.K = field_or<std::size_t>(sec, "K", 2000);
    cc.init_mean_r =
        parse_vector(sec.contains("init_mean_r") ? sec["init_mean_r"] : json(2.5), m, "optimize.init_mean_r");
    cc.init_mean_z0 =
        parse_vector(sec.contains("init_mean_z0") ? sec["init_mean_z0"] : json(0.5), n, "optimize.init_mean_z0");
    cc.init_stddev = field_or<double>(sec, "init_stddev", std::sqrt(1.5));
    cc.early_stop = field_or<bool>(sec, "early_stop", false);
    cc.seed = derive_seed(cfg.master_seed, "optimize");
    cc.exec = cfg.exec;
    const CboResult result = cbo_sp(obj, cc);
    manifest.duration("optimize", ms_since(t0));
    const double value = obj.eval(result.z0, result.r);
    manifest.extra()["iterations"] = result.iterations;
    manifest.add_artifact(
        opts.out_path,
        solution_json(result.z0, result.r, value, "cbo", result.iterations).dump(2) + "\n");
    manifest.add_artifact(opts.out_path + ".history.csv", history_csv(result.history));
    log << "cbo: r = (" << csv_fragment(result.r) << "), value = " << format_full(value) << "\n";
  } else {
    throw ConfigError("config: optimize.method must be 'pgda' or 'cbo'");
  }
  manifest.finish();
}

void cmd_heatmap(const PipelineOptions& opts, const LoadedConfig& cfg, std::ostream& log) {
  require_out(opts);
  const HeatModelConfig model = parse_model(cfg.root);
  const json& sec = require_section(cfg.root, "heatmap");
  if (!sec.contains("grid")) throw ConfigError("config: heatmap.grid is required");
  const auto grid = parse_grid(sec["grid"], model.m);
  const std::string source = opts.source.empty() ? "exact" : opts.source;

  ManifestWriter manifest(opts, cfg);
  const auto t0 = Clock::now();
  std::vector<double> exact_values;
  std::vector<double> surrogate_values;

  if (source == "exact" || source == "error") {
    const LtiSystem sys = assemble_system(model);
    const std::vector<RiccatiSolution> sols = solve_care_grid(sys, grid, cfg.exec);
    exact_values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      exact_values[i] = worst_case_value(sols[i]).first;
  }
  if (source == "surrogate" || source == "error") {
    if (opts.bundle_path.empty())
      throw ConfigError("heatmap with a surrogate source needs a --bundle file");
    const SurrogateBundle bundle = load_bundle(opts.bundle_path);
    if (std::visit([](const auto& s) { return s.m; }, bundle) != model.m)
      throw DimensionMismatch("heatmap: bundle m does not match the model section");
    surrogate_values.resize(grid.size());
    const std::uint64_t ascent_seed = derive_seed(cfg.master_seed, "heatmap");
    if (const auto* s = std::get_if<StructuredSurrogate>(&bundle)) {
      for_each_index(grid.size(), cfg.exec,
                     [&](std::size_t i) { surrogate_values[i] = worst_case_value_theta(*s, grid[i]); });
    } else {
      const auto& us = std::get<UnstructuredSurrogate>(bundle);
      const SphereAscentConfig ac;
      for_each_index(grid.size(), cfg.exec, [&](std::size_t i) {
        Rng rng(derive_stream_seed(ascent_seed, 0, i));
        surrogate_values[i] = worst_case_value_theta(us, grid[i], ac, rng);
      });
    }
  }

  std::vector<std::pair<DenseVector, double>> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = 0.0;
    if (source == "exact")
      v = exact_values[i];
    else if (source == "surrogate")
      v = surrogate_values[i];
    else if (source == "error")
      v = std::abs(exact_values[i] - surrogate_values[i]);
    else
      throw ConfigError("heatmap: --source must be exact, surrogate, or error");
    rows.emplace_back(grid[i], v);
  }
  manifest.duration("evaluate", ms_since(t0));
  manifest.extra()["points"] = grid.size();
  manifest.extra()["source"] = source;
  manifest.add_artifact(opts.out_path, heatmap_csv(rows));
  manifest.finish();
  log << "heatmap (" << source << "): " << grid.size() << " points -> " << opts.out_path << "\n";
}

void cmd_simulate(const PipelineOptions& opts, const LoadedConfig& cfg, std::ostream& log) {
  require_out(opts);
  const HeatModelConfig model = parse_model(cfg.root);
  const LtiSystem sys = assemble_system(model);
  const json& sec = require_section(cfg.root, "simulate");

  SimConfig sim;
  sim.t_final = field_or<double>(sec, "t_final", 1.0);
  sim.dt = field_or<double>(sec, "dt", 1e-3);
  sim.record_every = field_or<std::size_t>(sec, "record_every", 1);
  sim.validate();
  const double threshold = field_or<double>(sec, "threshold", 0.05);
  if (!sec.contains("r")) throw ConfigError("config: simulate.r is required");

  ManifestWriter manifest(opts, cfg);

  // Solves the ARE at placement r, closes the loop, and integrates from
  // either the requested z0 or the worst-case initial condition.
  const auto run_one = [&](const DenseVector& r, const json& z0_spec) {
    const DenseMatrix b = sys.input_map(r);
    const RiccatiSolution sol = solve_care(CareProblem(sys.A, b, sys.Q, sys.R));
    DenseVector z0(model.n, 0.0);
    if (z0_spec.is_string() && z0_spec.get<std::string>() == "worst") {
      z0 = worst_case_value(sol).second;
    } else {
      z0 = parse_vector(z0_spec, model.n, "simulate.z0");
    }
    const DenseMatrix k_fb = feedback_gain(sol, b, sys.R);
    const Trajectory traj = simulate_closed_loop(sys.A, b, k_fb, z0, sim);
    const SettlingMetrics metrics = settling_metrics(traj, threshold);
    json info;
    info["r"] = r.entries();
    info["z0"] = z0.entries();
    info["value"] = exact_value(sol, z0);
    info["final_norm"] = metrics.norms.back().second;
    info["threshold"] = threshold;
    info["settle_time"] = metrics.settle_time ? json(*metrics.settle_time) : json(nullptr);
    return std::pair<Trajectory, json>(traj, info);
  };

  const auto t0 = Clock::now();
  const DenseVector r = parse_vector(sec["r"], model.m, "simulate.r");
  const json z0_spec = sec.contains("z0") ? sec["z0"] : json("worst");
  auto [traj, info] = run_one(r, z0_spec);
  manifest.extra()["placement"] = info;
  log << "simulate: r = (" << csv_fragment(r) << "), settle_time = "
      << (info["settle_time"].is_null() ? std::string("none")
                                        : format_full(info["settle_time"].get<double>()))
      << "\n";

  json baseline_info;
  std::string baseline_csv;
  if (sec.contains("baseline_r")) {
    const DenseVector rb = parse_vector(sec["baseline_r"], model.m, "simulate.baseline_r");
    auto [btraj, binfo] = run_one(rb, z0_spec);
    baseline_info = binfo;
    baseline_csv = trajectory_csv(btraj);
    manifest.extra()["baseline"] = binfo;
    log << "baseline: r = (" << csv_fragment(rb) << "), settle_time = "
        << (binfo["settle_time"].is_null() ? std::string("none")
                                           : format_full(binfo["settle_time"].get<double>()))
        << "\n";
  }
  manifest.duration("simulate", ms_since(t0));
  manifest.add_artifact(opts.out_path, trajectory_csv(traj));
  if (!baseline_csv.empty()) manifest.add_artifact(opts.out_path + ".baseline.csv", baseline_csv);
  manifest.finish();
}

void cmd_info(const PipelineOptions& opts, const LoadedConfig& cfg, std::ostream& log) {
  const HeatModelConfig model = parse_model(cfg.root);
  const LtiSystem sys = assemble_system(model);
  std::string text = "n = " + std::to_string(model.n) + "\nm = " + std::to_string(model.m) +
                     "\ndelta = " + format_full(model.delta) + "\nA eigenvalues:";
  // A is diagonal for this plant; report the diagonal in mode order.
  for (std::size_t i = 0; i < model.n; ++i) text += " " + format_full(sys.A(i, i));
  text += "\n";
  log << text;
  if (!opts.out_path.empty()) {
    ManifestWriter manifest(opts, cfg);
    manifest.add_artifact(opts.out_path, text);
    manifest.finish();
  }
}

}  // namespace

void run_pipeline(const PipelineOptions& opts, std::ostream& log) {
  const LoadedConfig cfg = load_config(opts);
  if (opts.command == "data")
    cmd_data(opts, cfg, log);
  else if (opts.command == "train")
    cmd_train(opts, cfg, log);
  else if (opts.command == "optimize")
    cmd_optimize(opts, cfg, log);
  else if (opts.command == "heatmap")
    cmd_heatmap(opts, cfg, log);
  else if (opts.command == "simulate")
    cmd_simulate(opts, cfg, log);
  else if (opts.command == "info")
    cmd_info(opts, cfg, log);
  else
    throw ConfigError("unknown command: " + opts.command);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const OutOfDomain*>(&e) || dynamic_cast<const EmptyDataset*>(&e) ||
      dynamic_cast<const IoError*>(&e))
    return 2;
  if (dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const ShapeMismatch*>(&e))
    return 4;
  if (dynamic_cast<const NonFiniteIterate*>(&e) || dynamic_cast<const NonFiniteWeight*>(&e) ||
      dynamic_cast<const NonFiniteState*>(&e))
    return 5;
  if (dynamic_cast<const Error*>(&e)) return 3;  // solver failures
  return 1;
}

int run_pipeline_catching(const PipelineOptions& opts, std::ostream& log, std::ostream& err) {
  try {
    run_pipeline(opts, log);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace actlab
