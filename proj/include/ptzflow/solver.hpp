#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ptzflow/flow_model.hpp"

namespace ptzflow {

struct FlowSolution {
  std::vector<std::int64_t> flow;  // per arc, in graph order
  Value objective = 0;
};

// Exact maximum-value flow: successive shortest paths with node potentials on
// costs -value. Equal-value optima resolve toward lower camera-arc order
// (camera, period, target). Throws InfeasibleError naming the first unmet demand node.
FlowSolution solve(const FlowGraph& graph);

inline constexpr int kOracleMaxSlots = 12;

// Exhaustive search over every camera-period action. Needs each non-camera node
// to have a single outgoing arc, as build_graph produces.
FlowSolution brute_force_oracle(const FlowGraph& graph);

struct Action {
  enum class Kind { Idle, ObserveGroup, ObserveFixed };
  Kind kind = Kind::Idle;
  int target = -1;  // group or region index

  friend bool operator==(const Action&, const Action&) = default;
};

// actions[camera][period - 1]
struct Schedule {
  std::vector<std::vector<Action>> actions;

  const Action& at(int camera, int period) const {
    return actions.at(static_cast<std::size_t>(camera)).at(static_cast<std::size_t>(period - 1));
  }
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

Schedule extract_schedule(const FlowGraph& graph, const FlowSolution& solution);

// Sum of the arc values the schedule selects.
Value score_schedule(const FlowGraph& graph, const Schedule& schedule);

Value objective_of(const FlowGraph& graph, std::span<const std::int64_t> flow);

// balance + inflow - outflow per node; all zero for a feasible flow.
std::vector<std::int64_t> balance_residuals(const FlowGraph& graph, const FlowSolution& solution);

// Graph dump with a trailing flow column on arc lines and an objective line.
std::string dump_solution(const FlowGraph& graph, const FlowSolution& solution);

std::string describe_node(const FlowGraph& graph, int node);

}  // namespace ptzflow
