#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ptzflow/cli.hpp"
#include "ptzflow/errors.hpp"

namespace {

void configure_logging() {
  spdlog::set_default_logger(spdlog::stderr_color_st("ptzflow"));
  if (const char* level = std::getenv("PTZFLOW_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  } else {
    spdlog::set_level(spdlog::level::warn);
  }
  spdlog::set_pattern("[%l] %v");
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  using namespace ptzflow;

  CLI::App app{"PTZ camera scheduling simulator"};
  app.require_subcommand(1);

  RunOptions run;
  std::string format = "json";
  std::string planner;
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", run.config, "scenario file")->required();
    cmd->add_option("--seed", run.seed, "random seed");
    cmd->add_option("--out", run.out, "output directory");
    cmd->add_option("--format", format, "json or csv");
    cmd->add_option("--planner", planner, "flexible, flexible_grouped or master_slave");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "simulate one planner");
  add_run_flags(run_cmd);
  CLI::App* compare_cmd = app.add_subcommand("compare", "simulate every planner over several seeds");
  add_run_flags(compare_cmd);
  compare_cmd->add_option("--seeds", run.seeds, "number of consecutive seeds");

  ValidateOptions validate;
  CLI::App* validate_cmd = app.add_subcommand("validate", "check the solver against brute force");
  validate_cmd->add_option("--cameras", validate.max_cameras, "max cameras");
  validate_cmd->add_option("--groups", validate.max_groups, "max groups");
  validate_cmd->add_option("--regions", validate.max_regions, "max fixed regions");
  validate_cmd->add_option("--horizon", validate.max_horizon, "max horizon");
  validate_cmd->add_option("--trials", validate.trials, "number of instances");
  validate_cmd->add_option("--seed", validate.seed, "random seed");
  validate_cmd->add_flag("--corrupt", validate.corrupt, "perturb one solver value");

  std::string snapshot;
  CLI::App* plan_cmd = app.add_subcommand("plan", "plan once from a snapshot");
  plan_cmd->add_option("--config", snapshot, "snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    run.format = parse_format(format);
    if (!planner.empty()) run.planner = parse_planner_kind(planner);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
  if (*compare_cmd) return cmd_compare(run, std::cout, std::cerr);
  if (*validate_cmd) return cmd_validate(validate, std::cout, std::cerr);
  return cmd_plan(snapshot, std::cout, std::cerr);
}
