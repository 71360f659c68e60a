#include "rotor/app/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace rotor::app;

  CLI::App app{"Multirotor autonomy stack: simulate missions, replay estimator logs, check configs"};
  app.require_subcommand(1);

  SimRunOptions run;
  std::uint64_t seed = 0;
  double duration = 0.0;
  auto* sim = app.add_subcommand("sim-run", "Fly a mission in simulation and write logs plus a summary");
  sim->add_option("--config", run.config, "Stack config (YAML)")->required();
  sim->add_option("--mission", run.mission, "Mission file (YAML)")->required();
  sim->add_option("--out", run.out, "Output directory")->required();
  auto* seed_opt = sim->add_option("--seed", seed, "Override the config seed");
  auto* dur_opt = sim->add_option("--duration", duration, "Simulated seconds (default: derived from the mission)");

  ReplayOptions replay;
  auto* rep = app.add_subcommand("replay-estimator", "Run the estimator over the sensor topics of a recorded log");
  rep->add_option("--log", replay.log, "Recorded run directory")->required();
  rep->add_option("--config", replay.config, "Stack config supplying the estimator settings")->required();
  rep->add_option("--out", replay.out, "Output directory")->required();

  std::filesystem::path config;
  std::filesystem::path mission;
  auto* val = app.add_subcommand("validate", "Check a config (and optionally a mission) without running");
  val->add_option("--config", config, "Stack config (YAML)")->required();
  auto* mission_opt = val->add_option("--mission", mission, "Mission file (YAML)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUserError;
  }

  if (*sim) {
    if (*seed_opt) run.seed = seed;
    if (*dur_opt) run.duration = duration;
    return sim_run(run, std::cout, std::cerr);
  }
  if (*rep) return replay_estimator(replay, std::cout, std::cerr);
  return validate(config, *mission_opt ? std::optional(mission) : std::nullopt, std::cout, std::cerr);
}
