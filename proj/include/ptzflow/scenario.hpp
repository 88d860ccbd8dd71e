#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ptzflow/planner.hpp"

namespace ptzflow {

enum class PlannerKind { Flexible, FlexibleGrouped, MasterSlave };
enum class BaselinePolicy { EarliestDeadline, RoundRobin };

std::string_view to_string(PlannerKind kind);
PlannerKind parse_planner_kind(std::string_view text);

// Cameras evenly spaced along the bottom edge of the field.
std::vector<CameraConfig> default_cameras(const Rect& field, int count);

struct ScenarioConfig {
  Rect field{0.0, 0.0, 300.0, 160.0};
  std::vector<CameraConfig> cameras = default_cameras(field, 3);
  int regions = 0;  // 0: one band per camera

  double arrival_rate = 1.0 / 20.0;  // pedestrians per frame
  int frames_per_second = 18;
  int total_pedestrians = 400;
  double speed_min = 3.0;  // ft/s
  double speed_max = 5.0;
  double heading_jitter = 15.0 * kPi / 180.0;
  double walk_noise = 0.001;       // velocity diffusion, ft^2/s^3
  double detection_noise = 0.25;   // ft^2 per axis
  double max_time = 3600.0;        // hard stop, seconds

  NoiseModel filter;
  PlannerConfig planner;
  PlannerKind kind = PlannerKind::FlexibleGrouped;
  BaselinePolicy baseline = BaselinePolicy::EarliestDeadline;
  std::uint64_t seed = 1;

  // Throws ConfigError on invalid or inconsistent values.
  void validate() const;
  int region_count() const { return regions > 0 ? regions : static_cast<int>(cameras.size()); }
  Scene scene() const;
  // Stable text form of every parameter, used for hashing.
  std::string canonical() const;
};

// `key = value` lines under [scenario], [planner] and repeated [camera] sections.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Scenario plus tracker state for a one-shot plan ([snapshot] and [track] sections).
struct Snapshot {
  ScenarioConfig config;
  double now = 0.0;
  PlanState state;
  std::vector<Track> tracks;
};

Snapshot parse_snapshot(std::string_view text);
Snapshot load_snapshot(const std::filesystem::path& path);

std::uint64_t fnv1a(std::string_view text);

}  // namespace ptzflow
