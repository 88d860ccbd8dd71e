#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>

#include "ptzflow/flow_model.hpp"
#include "ptzflow/metrics.hpp"
#include "ptzflow/scenario.hpp"

namespace ptzflow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

struct RunOptions {
  std::filesystem::path config;
  std::uint64_t seed = 1;
  int seeds = 1;
  std::filesystem::path out = ".";
  ReportFormat format = ReportFormat::Json;
  std::optional<PlannerKind> planner;  // overrides the config file
};

struct ValidateOptions {
  int max_cameras = 2;
  int max_groups = 3;
  int max_regions = 2;
  int max_horizon = 4;
  int trials = 200;
  std::uint64_t seed = 1;
  bool corrupt = false;  // test hook: perturb one value seen by the solver only
};

struct ValidateSummary {
  int trials = 0;
  int matched = 0;
  int integral = 0;
  int balanced = 0;
  int checked_constraints = 0;
};

// Random small plannable instance within the limits; never fails to return.
struct RandomInstance {
  ValueTable values;
  int horizon = 1;
  int window = 1;
  PlanState state;
};
RandomInstance random_instance(std::mt19937_64& rng, const ValidateOptions& limits);

// Group captured at most once, every demand window met, one action per camera-period.
bool schedule_respects_constraints(const FlowGraph& graph, const FlowSolution& solution);

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err,
                 ValidateSummary* summary = nullptr);
int cmd_plan(const std::filesystem::path& snapshot, std::ostream& out, std::ostream& err);

// Writes through a temporary file and renames, so readers never see partial output.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

std::string run_basename(std::string_view method, std::uint64_t seed);
std::string_view extension(ReportFormat format);

}  // namespace ptzflow
