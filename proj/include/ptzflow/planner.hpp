#pragma once

#include <span>
#include <vector>

#include "ptzflow/camera_model.hpp"
#include "ptzflow/flow_model.hpp"
#include "ptzflow/grouping.hpp"
#include "ptzflow/solver.hpp"
#include "ptzflow/tracking.hpp"
#include "ptzflow/valuation.hpp"

namespace ptzflow {

struct PlannerConfig {
  int horizon = 10;          // H, periods per plan
  int window = 5;            // T, fixed-look revisit window
  double period_len = 3.0;   // seconds
  double group_radius = 6.0; // feet
  bool grouped = true;
  PFormula p_formula = PFormula::Conserved;
};

// Static description of the monitored scene.
struct Scene {
  Rect field;
  std::vector<CameraConfig> cameras;
  std::vector<FixedRegion> regions;
};

struct Plan {
  std::vector<GroupNode> groups;
  ValueContext context;
  ValueTable values;
  FlowGraph graph;
  FlowSolution solution;
  Schedule schedule;
};

// `count` equal-width vertical bands spanning the field.
std::vector<FixedRegion> vertical_bands(const Rect& field, int count);

// Time from period start to the middle of the capture, when a zoomed look counts.
double capture_offset(const Scene& scene);

// Groups over the tracks still awaiting interrogation. Singletons when
// cfg.grouped is false. Focus positions are predicted at capture time per period.
std::vector<GroupNode> form_groups(std::span<const Track> tracks, const Scene& scene,
                                   const PlannerConfig& cfg, double now);

// One planning call: group, value, build, solve, decode.
Plan make_plan(const Scene& scene, const PlannerConfig& cfg, double now,
               std::span<const Track> tracks, const PlanState& state = {});

}  // namespace ptzflow
