#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "actlab/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"actuator-lab: worst-case optimal actuator placement pipeline"};
  app.require_subcommand(1);

  actlab::PipelineOptions opts;
  std::uint64_t seed_value = 0;

  const auto add_common = [&](CLI::App* sub, bool out_required) {
    sub->add_option("--config", opts.config_path, "JSON configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    auto* out = sub->add_option("--out", opts.out_path, "output artifact path");
    if (out_required) out->required();
    sub->add_option("--seed", seed_value, "master seed override")
        ->each([&](const std::string&) { opts.seed = seed_value; });
  };

  auto* data = app.add_subcommand("data", "generate a training dataset CSV");
  add_common(data, true);

  auto* train = app.add_subcommand("train", "train a surrogate from a dataset");
  add_common(train, true);
  train->add_option("--data", opts.data_path, "dataset CSV from the data command")
      ->required()
      ->check(CLI::ExistingFile);

  auto* optimize = app.add_subcommand("optimize", "solve the max-min placement problem");
  add_common(optimize, true);
  optimize->add_option("--bundle", opts.bundle_path, "surrogate bundle JSON")
      ->required()
      ->check(CLI::ExistingFile);

  auto* heatmap = app.add_subcommand("heatmap", "worst-case value over a grid of placements");
  add_common(heatmap, true);
  heatmap->add_option("--bundle", opts.bundle_path, "surrogate bundle JSON")
      ->check(CLI::ExistingFile);
  heatmap->add_option("--source", opts.source, "exact | surrogate | error")
      ->check(CLI::IsMember({"exact", "surrogate", "error"}));

  auto* simulate = app.add_subcommand("simulate", "closed-loop validation of a placement");
  add_common(simulate, true);

  auto* info = app.add_subcommand("info", "print the assembled model");
  add_common(info, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  opts.command = app.get_subcommands().front()->get_name();
  return actlab::run_pipeline_catching(opts, std::cout, std::cerr);
}
