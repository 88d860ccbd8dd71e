#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptzflow/valuation.hpp"

namespace ptzflow {

enum class NodeKind { Camera, GroupLoc, FixedLoc, Demand, Sink };

enum class ArcKind {
  CameraGroup,
  CameraFixed,
  CameraIdle,
  GroupCarry,
  GroupSink,
  FixedDemand,
  DemandSink,
};

// `time` is the period (1..H) for camera/group/fixed nodes, the window index
// (1..W) for demand nodes and 0 for the sink. Positive balance is supply.
struct FlowNode {
  NodeKind kind = NodeKind::Sink;
  int entity = -1;
  int time = 0;
  std::int64_t balance = 0;
};

struct FlowArc {
  int from = 0;
  int to = 0;
  std::int64_t capacity = 1;
  Value value = 0;
  ArcKind kind = ArcKind::GroupCarry;
};

// Carry-over state when replanning in the middle of a fixed-look window.
struct PlanState {
  int window_phase = 0;                 // periods of the current window already elapsed
  std::vector<bool> region_satisfied;   // region already looked at in the current window
  std::vector<bool> group_interrogated; // group captured before period 1
};

// Sink balance P as derived from conservation, or as printed (T*l - (H/T)*m),
// kept for comparison; the printed form only balances when H == T.
enum class PFormula { Conserved, Printed };

struct FlowGraph {
  std::vector<FlowNode> nodes;
  std::vector<FlowArc> arcs;
  int horizon = 0;
  int window = 0;
  int cameras = 0;
  int groups = 0;
  int regions = 0;
  int window_phase = 0;
  int demand_windows = 0;
  int sink = -1;

  int camera_node(int camera, int period) const;
  int group_node(int group, int period) const;
  int fixed_node(int region, int period) const;
  int demand_node(int region, int window_index) const;
  // First and last plan period (1-based, inclusive) covered by a demand window.
  std::pair<int, int> window_periods(int window_index) const;
};

std::int64_t compute_P(int horizon, int window, int cameras, int regions,
                       PFormula formula = PFormula::Conserved);

// First violated structural condition, or nullopt when the sizes are plannable.
std::optional<std::string> feasibility_check(int horizon, int window, int cameras,
                                             int regions, int groups);

// Time-expanded network over H periods. Camera->sink idle arcs are added only when
// there are more cameras than fixed regions. Throws ConfigError on bad sizes.
FlowGraph build_graph(const ValueTable& values, int horizon, int window,
                      const PlanState& state = {}, PFormula formula = PFormula::Conserved);

// Line format: `N <id> <kind> <entity> <t> <balance>` and `A <from> <to> <cap> <value>`,
// preceded by one `#` metadata line.
std::string dump_graph(const FlowGraph& graph);
FlowGraph parse_graph_dump(std::string_view text);

std::string_view to_string(NodeKind kind);

}  // namespace ptzflow
