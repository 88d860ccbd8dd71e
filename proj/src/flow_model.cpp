#include "ptzflow/flow_model.hpp"

#include <sstream>
#include <stdexcept>

#include "ptzflow/errors.hpp"

namespace ptzflow {

namespace {

NodeKind parse_kind(const std::string& word) {
  if (word == "camera") return NodeKind::Camera;
  if (word == "group") return NodeKind::GroupLoc;
  if (word == "fixed") return NodeKind::FixedLoc;
  if (word == "demand") return NodeKind::Demand;
  if (word == "sink") return NodeKind::Sink;
  throw std::invalid_argument("graph dump: unknown node kind '" + word + "'");
}

ArcKind infer_arc_kind(NodeKind from, NodeKind to) {
  switch (from) {
    case NodeKind::Camera:
      if (to == NodeKind::GroupLoc) return ArcKind::CameraGroup;
      if (to == NodeKind::FixedLoc) return ArcKind::CameraFixed;
      if (to == NodeKind::Sink) return ArcKind::CameraIdle;
      break;
    case NodeKind::GroupLoc:
      if (to == NodeKind::GroupLoc) return ArcKind::GroupCarry;
      if (to == NodeKind::Sink) return ArcKind::GroupSink;
      break;
    case NodeKind::FixedLoc:
      if (to == NodeKind::Demand) return ArcKind::FixedDemand;
      break;
    case NodeKind::Demand:
      if (to == NodeKind::Sink) return ArcKind::DemandSink;
      break;
    case NodeKind::Sink:
      break;
  }
  throw std::invalid_argument("graph dump: arc between incompatible node kinds");
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Camera: return "camera";
    case NodeKind::GroupLoc: return "group";
    case NodeKind::FixedLoc: return "fixed";
    case NodeKind::Demand: return "demand";
    case NodeKind::Sink: return "sink";
  }
  return "?";
}

int FlowGraph::camera_node(int camera, int period) const {
  return camera * horizon + (period - 1);
}

int FlowGraph::group_node(int group, int period) const {
  return (cameras + group) * horizon + (period - 1);
}

int FlowGraph::fixed_node(int region, int period) const {
  return (cameras + groups + region) * horizon + (period - 1);
}

int FlowGraph::demand_node(int region, int window_index) const {
  return (cameras + groups + regions) * horizon + region * demand_windows + (window_index - 1);
}

std::pair<int, int> FlowGraph::window_periods(int window_index) const {
  const int first = std::max(1, (window_index - 1) * window - window_phase + 1);
  const int last = std::min(horizon, window_index * window - window_phase);
  return {first, last};
}

std::int64_t compute_P(int horizon, int window, int cameras, int regions, PFormula formula) {
  if (window <= 0 || horizon % window != 0) {
    throw ConfigError("compute_P: window T must divide horizon H");
  }
  const std::int64_t windows = horizon / window;
  const std::int64_t slots =
      formula == PFormula::Conserved ? std::int64_t{horizon} * cameras
                                     : std::int64_t{window} * cameras;
  const std::int64_t p = slots - windows * regions;
  if (p < 0) throw InfeasibleError("compute_P: P is negative");
  return p;
}

std::optional<std::string> feasibility_check(int horizon, int window, int cameras,
                                             int regions, int groups) {
  if (horizon <= 0 || window <= 0 || cameras <= 0 || regions < 0 || groups < 0) {
    return "sizes must be positive (H, T, l) and non-negative (m, n)";
  }
  if (horizon % window != 0) return "T | H: window T does not divide horizon H";
  if (std::int64_t{horizon} * cameras - std::int64_t{horizon / window} * regions < 0) {
    return "P >= 0: fewer camera-periods than mandatory fixed looks";
  }
  if (std::int64_t{cameras} * window < regions) {
    return "l*T >= m: too few camera slots per window to look at every fixed region";
  }
  return std::nullopt;
}

FlowGraph build_graph(const ValueTable& values, int horizon, int window,
                      const PlanState& state, PFormula formula) {
  const int l = values.cameras();
  const int n = values.groups();
  const int m = values.regions();
  if (values.horizon() != horizon) {
    throw ConfigError("build_graph: value table horizon does not match H");
  }
  if (auto problem = feasibility_check(horizon, window, l, m, n)) {
    throw ConfigError("build_graph: " + *problem);
  }
  if (state.window_phase < 0 || state.window_phase >= window) {
    throw ConfigError("build_graph: window phase must lie in [0, T)");
  }

  FlowGraph g;
  g.horizon = horizon;
  g.window = window;
  g.cameras = l;
  g.groups = n;
  g.regions = m;
  g.window_phase = state.window_phase;
  g.demand_windows = (state.window_phase + horizon + window - 1) / window;

  for (int i = 0; i < l; ++i)
    for (int t = 1; t <= horizon; ++t) g.nodes.push_back({NodeKind::Camera, i, t, 1});
  for (int j = 0; j < n; ++j) {
    const bool injected =
        j < static_cast<int>(state.group_interrogated.size()) && state.group_interrogated[j];
    for (int t = 1; t <= horizon; ++t) {
      g.nodes.push_back({NodeKind::GroupLoc, j, t, (t == 1 && injected) ? 1 : 0});
    }
  }
  for (int k = 0; k < m; ++k)
    for (int t = 1; t <= horizon; ++t) g.nodes.push_back({NodeKind::FixedLoc, k, t, 0});

  std::vector<std::int64_t> demand_caps;
  for (int k = 0; k < m; ++k) {
    for (int w = 1; w <= g.demand_windows; ++w) {
      const auto [first, last] = g.window_periods(w);
      const bool truncated = w * window - state.window_phase > horizon;
      const bool satisfied = w == 1 && state.window_phase > 0 &&
                             k < static_cast<int>(state.region_satisfied.size()) &&
                             state.region_satisfied[k];
      const std::int64_t demand = (truncated || satisfied) ? 0 : 1;
      g.nodes.push_back({NodeKind::Demand, k, w, -demand});
      demand_caps.push_back(std::int64_t{last - first + 1} - demand);
    }
  }

  std::int64_t net = 0;
  for (const FlowNode& node : g.nodes) net += node.balance;
  std::int64_t sink_demand = net;
  if (formula == PFormula::Printed) {
    const std::int64_t injected = net - (std::int64_t{horizon} * l) +
                                  std::int64_t{horizon / window} * m;
    sink_demand = compute_P(horizon, window, l, m, PFormula::Printed) + injected;
    if (sink_demand != net) {
      throw ConfigError("build_graph: printed P = " + std::to_string(sink_demand) +
                        " breaks supply/demand balance (needs " + std::to_string(net) + ")");
    }
  }
  if (sink_demand < 0) throw InfeasibleError("build_graph: negative sink balance P");
  g.sink = static_cast<int>(g.nodes.size());
  g.nodes.push_back({NodeKind::Sink, -1, 0, -sink_demand});

  const bool idle_arcs = l > m;
  for (int i = 0; i < l; ++i) {
    for (int t = 1; t <= horizon; ++t) {
      const int from = g.camera_node(i, t);
      for (int j = 0; j < n; ++j) {
        if (auto v = values.group(i, j, t)) {
          g.arcs.push_back({from, g.group_node(j, t), 1, *v, ArcKind::CameraGroup});
        }
      }
      for (int k = 0; k < m; ++k) {
        g.arcs.push_back({from, g.fixed_node(k, t), 1, values.fixed(i, k, t),
                          ArcKind::CameraFixed});
      }
      if (idle_arcs) g.arcs.push_back({from, g.sink, 1, 0, ArcKind::CameraIdle});
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int t = 1; t < horizon; ++t) {
      g.arcs.push_back({g.group_node(j, t), g.group_node(j, t + 1), 1, 0, ArcKind::GroupCarry});
    }
    g.arcs.push_back({g.group_node(j, horizon), g.sink, 1, 0, ArcKind::GroupSink});
  }
  for (int k = 0; k < m; ++k) {
    for (int t = 1; t <= horizon; ++t) {
      const int w = (state.window_phase + t - 1) / window + 1;
      g.arcs.push_back({g.fixed_node(k, t), g.demand_node(k, w), 1, 0, ArcKind::FixedDemand});
    }
  }
  for (int k = 0; k < m; ++k) {
    for (int w = 1; w <= g.demand_windows; ++w) {
      g.arcs.push_back({g.demand_node(k, w), g.sink,
                        demand_caps[static_cast<std::size_t>(k * g.demand_windows + w - 1)], 0,
                        ArcKind::DemandSink});
    }
  }
  return g;
}

std::string dump_graph(const FlowGraph& g) {
  std::ostringstream out;
  out << "# H=" << g.horizon << " T=" << g.window << " l=" << g.cameras << " n=" << g.groups
      << " m=" << g.regions << " phase=" << g.window_phase << "\n";
  for (std::size_t id = 0; id < g.nodes.size(); ++id) {
    const FlowNode& node = g.nodes[id];
    out << "N " << id << ' ' << to_string(node.kind) << ' ';
    if (node.kind == NodeKind::Sink) {
      out << "- -";
    } else {
      out << node.entity << ' ' << node.time;
    }
    out << ' ' << node.balance << '\n';
  }
  for (const FlowArc& arc : g.arcs) {
    out << "A " << arc.from << ' ' << arc.to << ' ' << arc.capacity << ' ' << arc.value << '\n';
  }
  return out.str();
}

FlowGraph parse_graph_dump(std::string_view text) {
  FlowGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "#") {
      std::string item;
      while (fields >> item) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = item.substr(0, eq);
        const int v = std::stoi(item.substr(eq + 1));
        if (key == "H") g.horizon = v;
        else if (key == "T") g.window = v;
        else if (key == "l") g.cameras = v;
        else if (key == "n") g.groups = v;
        else if (key == "m") g.regions = v;
        else if (key == "phase") g.window_phase = v;
      }
    } else if (tag == "N") {
      std::size_t id = 0;
      std::string kind, entity, time;
      std::int64_t balance = 0;
      if (!(fields >> id >> kind >> entity >> time >> balance) || id != g.nodes.size()) {
        throw std::invalid_argument("graph dump: malformed node line: " + line);
      }
      FlowNode node;
      node.kind = parse_kind(kind);
      node.entity = entity == "-" ? -1 : std::stoi(entity);
      node.time = time == "-" ? 0 : std::stoi(time);
      node.balance = balance;
      if (node.kind == NodeKind::Sink) g.sink = static_cast<int>(id);
      if (node.kind == NodeKind::Demand) g.demand_windows = std::max(g.demand_windows, node.time);
      g.nodes.push_back(node);
    } else if (tag == "A") {
      FlowArc arc;
      if (!(fields >> arc.from >> arc.to >> arc.capacity >> arc.value)) {
        throw std::invalid_argument("graph dump: malformed arc line: " + line);
      }
      const auto size = static_cast<int>(g.nodes.size());
      if (arc.from < 0 || arc.from >= size || arc.to < 0 || arc.to >= size) {
        throw std::invalid_argument("graph dump: arc references an unknown node: " + line);
      }
      arc.kind = infer_arc_kind(g.nodes[static_cast<std::size_t>(arc.from)].kind,
                                g.nodes[static_cast<std::size_t>(arc.to)].kind);
      g.arcs.push_back(arc);
    } else {
      throw std::invalid_argument("graph dump: unknown record: " + line);
    }
  }
  if (g.sink < 0) throw std::invalid_argument("graph dump: no sink node");
  return g;
}

}  // namespace ptzflow
