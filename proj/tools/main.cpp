#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "pairinfo/commands.hpp"

namespace {

using namespace pairinfo;
using namespace pairinfo::cli;

std::optional<Objective> parse_objective(const std::string& name) {
  if (name == "H") return Objective::MutualInfo;
  if (name == "Ig") return Objective::PerGenerated;
  if (name == "Id") return Objective::PerDetected;
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-information calculator for entangled photon-pair links"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string output_path;
  bool csv_only = false;
  std::uint64_t seed = 1;
  int jobs = 1;
  app.add_option("--config", config_path, "scenario config file (key = value lines)");
  app.add_option("--output", output_path, "output file path");
  app.add_flag("--csv", csv_only, "machine-readable CSV output only");
  app.add_option("--seed", seed, "random seed for stochastic checks");
  app.add_option("--jobs", jobs, "worker threads for sweeps and simulation")
      ->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "evaluate a scenario file");

  auto* figure = app.add_subcommand("figure", "write one figure's data as CSV");
  std::string figure_name;
  figure
      ->add_option("name", figure_name,
                   "one of: fig1 fig2a fig2b fig3a fig3b fig5 fibre-array")
      ->required();
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  auto* opt_min = figure->add_option("--lambda-min", lambda_min,
                                     "override the sweep's lower lambda bound");
  auto* opt_max = figure->add_option("--lambda-max", lambda_max,
                                     "override the sweep's upper lambda bound");

  auto* optimize = app.add_subcommand("optimize", "maximize an objective over lambda");
  std::string objective_name;
  optimize->add_option("--objective", objective_name,
                       "objective H, Ig or Id (default: config objective)");
  double log10_min = -12.0;
  double log10_max = 2.0;
  optimize->add_option("--log10-min", log10_min, "lower log10(lambda) bracket");
  optimize->add_option("--log10-max", log10_max, "upper log10(lambda) bracket");

  auto* verify = app.add_subcommand("verify", "run the analytic-vs-oracle check suite");
  double tolerance = 1e-12;
  std::uint64_t trials = 1'000'000;
  verify->add_option("--tolerance", tolerance,
                     "tolerance of the deterministic agreement checks");
  verify->add_option("--trials", trials, "Monte-Carlo trials per grid point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (eval->parsed()) {
    if (config_path.empty()) {
      std::cerr << "eval requires --config\n";
      return kExitUsage;
    }
    return run_eval({config_path, csv_only}, std::cout, std::cerr);
  }

  if (figure->parsed()) {
    if (output_path.empty()) {
      std::cerr << "figure requires --output\n";
      return kExitUsage;
    }
    FigureCommandOptions options;
    options.name = figure_name;
    options.output = output_path;
    if (opt_min->count() > 0) options.figure.lambda_min = lambda_min;
    if (opt_max->count() > 0) options.figure.lambda_max = lambda_max;
    options.figure.jobs = jobs;
    return run_figure(options, std::cerr);
  }

  if (optimize->parsed()) {
    if (config_path.empty()) {
      std::cerr << "optimize requires --config\n";
      return kExitUsage;
    }
    OptimizeOptions options;
    options.config = config_path;
    options.log10_bracket = {log10_min, log10_max};
    options.csv_only = csv_only;
    if (!objective_name.empty()) {
      options.objective = parse_objective(objective_name);
      if (!options.objective) {
        std::cerr << "unknown objective '" << objective_name << "' (use H, Ig or Id)\n";
        return kExitUsage;
      }
    }
    return run_optimize(options, std::cout, std::cerr);
  }

  if (verify->parsed()) {
    VerifyOptions options;
    options.tolerance = tolerance;
    options.trials = trials;
    options.seed = seed;
    options.jobs = jobs;
    return run_verify(options, std::cout);
  }

  return kExitUsage;
}
