#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ptzflow/metrics.hpp"
#include "ptzflow/scenario.hpp"

namespace ptzflow {

struct Pedestrian {
  int id = 0;
  TrackState truth;
  double entry_time = 0.0;
  std::mt19937_64 rng;  // walk noise, seeded per pedestrian
};

// What a camera is doing during the current period.
struct CameraTask {
  enum class Kind { Idle, FixedLook, Zoom, WideStatic };
  Kind kind = Kind::Idle;
  int target = -1;                 // region for FixedLook, group for Zoom
  std::optional<Footprint> view;   // Zoom only; empty if the aim failed
  Rect area;                       // FixedLook region, or the field for WideStatic
  bool sensing = false;            // inside the capture phase this frame
  std::vector<int> planned;        // ascending; only these can be captured
  std::set<int> seen;              // pedestrians detected during this task
  std::set<int> captured;          // planned members inside the zoomed view at mid-capture
};

struct WorldState {
  double clock = 0.0;
  std::vector<Pedestrian> live;  // ascending id
  std::map<int, Track> tracks;
  std::vector<CameraTask> tasks;
  std::map<int, double> first_detection;
  std::set<int> interrogated;
  int spawned = 0;
  int exited = 0;
  std::string trace;
};

// Arrivals for one frame: Poisson count, entry uniform on the top edge, heading
// south within the jitter, speed uniform. Never exceeds the configured total.
std::vector<Pedestrian> spawn_pedestrians(const ScenarioConfig& cfg, std::mt19937_64& rng,
                                          long frame, int already_spawned);

// Noisy centre observation of a pedestrian.
Observation detect(const Pedestrian& ped, const ScenarioConfig& cfg, std::mt19937_64& rng);

// Moves pedestrians by dt, logs and removes those that left the field, then
// feeds detections from every sensing camera into the tracks.
void step_world(WorldState& state, const ScenarioConfig& cfg, double dt,
                std::mt19937_64& sensor_rng);

struct RunResult {
  std::string trace;
  MetricsReport report;
};

RunResult run_flexible(const ScenarioConfig& cfg);
RunResult run_master_slave(const ScenarioConfig& cfg);
// Dispatches on cfg.kind.
RunResult run_scenario(const ScenarioConfig& cfg);

std::string config_hash(const ScenarioConfig& cfg);

}  // namespace ptzflow
