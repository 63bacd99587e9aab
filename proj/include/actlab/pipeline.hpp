#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace actlab {

inline constexpr const char* kVersion = "0.1.0";

// One CLI invocation. config_path is required for every command; the rest
// depend on the command (see the README command table).
struct PipelineOptions {
  std::string command;      // data | train | optimize | heatmap | simulate | info
  std::string config_path;
  std::string out_path;
  std::string data_path;    // train: dataset CSV produced by `data`
  std::string bundle_path;  // optimize / heatmap: surrogate bundle JSON
  std::string source = "exact";  // heatmap: exact | surrogate | error
  std::optional<std::uint64_t> seed;  // overrides the config's master seed
};

// Runs one subcommand, writing human-readable progress to log. Throws an
// actlab::Error subclass on failure; artifacts are written atomically, so a
// failed run leaves nothing at the declared output paths.
void run_pipeline(const PipelineOptions& opts, std::ostream& log);

// Documented exit codes: 0 ok, 2 config, 3 solver, 4 dimension, 5 numeric.
int exit_code_for(const std::exception& e);

// run_pipeline wrapper that reports the error and returns the exit code.
int run_pipeline_catching(const PipelineOptions& opts, std::ostream& log, std::ostream& err);

}  // namespace actlab
