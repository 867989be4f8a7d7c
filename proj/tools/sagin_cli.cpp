#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using sagin::cli::Options;
  Options opt;
  for (int k = 0; k < argc; ++k) opt.command_line += (k ? " " : "") + std::string(argv[k]);

  CLI::App app{"Space-air-ground LLM agent provisioning simulator"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "scenario config file (defaults built in)");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", seed, "override the scenario seed");
  };

  auto* simulate = app.add_subcommand("simulate", "run scenarios and write per-slot costs and cache events");
  common(simulate);
  simulate->add_option("--policy", opt.policies, "least_aot, fifo, lfu")->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  common(sweep);
  sweep->add_option("--policy", opt.policies, "least_aot, fifo, lfu")->delimiter(',');
  sweep->add_option("--axis", opt.axis, "slots, services, gpus, users or vanish")->required();
  sweep->add_option("--values", opt.values, "comma-separated axis values")->delimiter(',')->required();
  sweep->add_option("--seeds", opt.seeds, "seeds averaged per point")->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("auction-train", "train the DQMSB pricing network");
  common(train);
  train->add_option("--episodes", opt.episodes, "episodes (defaults to the config)")->check(CLI::NonNegativeNumber);

  auto* eval = app.add_subcommand("auction-eval", "compare mechanisms on a shared profile stream");
  common(eval);
  eval->add_option("--checkpoint", opt.checkpoint, "trained network (default <out>/dqmsb.ckpt)");
  eval->add_option("--mechanism", opt.mechanisms, "dqmsb, spa, msb, myopic, optimal")->delimiter(',');
  eval->add_option("--rounds", opt.rounds, "auction rounds")->check(CLI::PositiveNumber);
  eval->add_option("--rho", opt.rho, "fixed scaling factor of the msb mechanism")->check(CLI::Range(1.0, 1e9));

  auto* verify = app.add_subcommand("verify", "run the oracle suites");
  common(verify);
  verify->add_option("--suite", opt.suite,
                     "all, theorem1, strategyproof, scaling, spa, tiny or gradients");
  verify->add_option("--trials", opt.trials, "override the case count of every selected suite")
      ->check(CLI::PositiveNumber);
  verify->add_option("--mechanism", opt.mechanisms, "mechanism under the strategy-proofness fuzz")
      ->delimiter(',');

  auto* report = app.add_subcommand("report", "summarise CSV outputs found in --out");
  report->add_option("--out", opt.out, "directory holding earlier outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sagin::cli::kConfigError;
  }
  for (auto* sub : app.get_subcommands()) opt.verb = sub->get_name();
  if (!app.get_subcommands().empty()) {
    auto* sub = app.get_subcommands().front();
    if (sub->get_option_no_throw("--seed") && sub->count("--seed")) opt.seed = seed;
  }
  return sagin::cli::run_command(opt);
}
