#include "ptzflow/solver.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include "ptzflow/errors.hpp"

namespace ptzflow {

namespace {

using Wide = __int128;

constexpr Wide kUnreached = std::numeric_limits<Wide>::max() / 4;

Value clamp_value(Wide v) {
  if (v > std::numeric_limits<Value>::max()) return std::numeric_limits<Value>::max();
  if (v < std::numeric_limits<Value>::min()) return std::numeric_limits<Value>::min();
  return static_cast<Value>(v);
}

// Residual network for successive shortest paths.
class Residual {
 public:
  struct Edge {
    int to;
    std::int64_t cap;
    Wide cost;
  };

  explicit Residual(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  int add(int from, int to, std::int64_t cap, Wide cost) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({to, cap, cost});
    edges_.push_back({from, 0, -cost});
    adj_[static_cast<std::size_t>(from)].push_back(id);
    adj_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
  }

  std::int64_t residual(int edge) const { return edges_[static_cast<std::size_t>(edge)].cap; }

  // Pushes up to `need` units from source to target; returns the amount sent.
  std::int64_t min_cost_flow(int source, int target, std::int64_t need) {
    const std::size_t n = adj_.size();
    potential_.assign(n, 0);
    bellman_ford(source);

    std::int64_t sent = 0;
    std::vector<Wide> dist(n);
    std::vector<int> via(n);
    while (sent < need) {
      std::fill(dist.begin(), dist.end(), kUnreached);
      std::fill(via.begin(), via.end(), -1);
      using Entry = std::pair<Wide, int>;
      std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
      dist[static_cast<std::size_t>(source)] = 0;
      heap.push({0, source});
      while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d != dist[static_cast<std::size_t>(u)]) continue;
        for (int id : adj_[static_cast<std::size_t>(u)]) {
          const Edge& e = edges_[static_cast<std::size_t>(id)];
          if (e.cap <= 0 || potential_[static_cast<std::size_t>(e.to)] >= kUnreached) continue;
          const Wide nd = d + e.cost + potential_[static_cast<std::size_t>(u)] -
                          potential_[static_cast<std::size_t>(e.to)];
          if (nd < dist[static_cast<std::size_t>(e.to)]) {
            dist[static_cast<std::size_t>(e.to)] = nd;
            via[static_cast<std::size_t>(e.to)] = id;
            heap.push({nd, e.to});
          }
        }
      }
      if (dist[static_cast<std::size_t>(target)] >= kUnreached) break;
      for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] < kUnreached) potential_[v] += dist[v];
      }
      std::int64_t push = need - sent;
      for (int v = target; v != source;) {
        const int id = via[static_cast<std::size_t>(v)];
        push = std::min(push, edges_[static_cast<std::size_t>(id)].cap);
        v = edges_[static_cast<std::size_t>(id ^ 1)].to;
      }
      for (int v = target; v != source;) {
        const int id = via[static_cast<std::size_t>(v)];
        edges_[static_cast<std::size_t>(id)].cap -= push;
        edges_[static_cast<std::size_t>(id ^ 1)].cap += push;
        v = edges_[static_cast<std::size_t>(id ^ 1)].to;
      }
      sent += push;
    }
    return sent;
  }

 private:
  void bellman_ford(int source) {
    const std::size_t n = adj_.size();
    std::fill(potential_.begin(), potential_.end(), kUnreached);
    potential_[static_cast<std::size_t>(source)] = 0;
    for (std::size_t round = 0; round + 1 < n; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < n; ++u) {
        if (potential_[u] >= kUnreached) continue;
        for (int id : adj_[u]) {
          const Edge& e = edges_[static_cast<std::size_t>(id)];
          if (e.cap <= 0) continue;
          const Wide nd = potential_[u] + e.cost;
          if (nd < potential_[static_cast<std::size_t>(e.to)]) {
            potential_[static_cast<std::size_t>(e.to)] = nd;
            changed = true;
          }
        }
      }
      if (!changed) return;
    }
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<Wide> potential_;
};

bool from_camera(const FlowGraph& g, const FlowArc& arc) {
  return g.nodes[static_cast<std::size_t>(arc.from)].kind == NodeKind::Camera;
}

}  // namespace

std::string describe_node(const FlowGraph& g, int node) {
  const FlowNode& n = g.nodes.at(static_cast<std::size_t>(node));
  std::ostringstream out;
  out << "node " << node << " (" << to_string(n.kind);
  if (n.kind != NodeKind::Sink) out << ' ' << n.entity << " t=" << n.time;
  out << ", balance " << n.balance << ')';
  return out.str();
}

FlowSolution solve(const FlowGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  const int source = n;
  const int target = n + 1;
  Residual net(n + 2);

  // Lexicographic tie-break: a perturbation smaller than one unit of value.
  std::int64_t camera_arcs = 0;
  std::int64_t camera_nodes = 0;
  for (const FlowArc& arc : g.arcs) camera_arcs += from_camera(g, arc) ? 1 : 0;
  for (const FlowNode& node : g.nodes) camera_nodes += node.kind == NodeKind::Camera ? 1 : 0;
  const Wide scale = Wide{camera_nodes} * camera_arcs + 1;

  std::vector<int> arc_edge(g.arcs.size());
  std::int64_t order = 0;
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    const FlowArc& arc = g.arcs[a];
    Wide cost = -Wide{arc.value} * scale;
    if (from_camera(g, arc)) cost += ++order;
    arc_edge[a] = net.add(arc.from, arc.to, arc.capacity, cost);
  }

  std::int64_t supply = 0;
  std::int64_t demand = 0;
  std::vector<std::pair<int, int>> demand_edges;
  for (int v = 0; v < n; ++v) {
    const std::int64_t b = g.nodes[static_cast<std::size_t>(v)].balance;
    if (b > 0) {
      net.add(source, v, b, 0);
      supply += b;
    } else if (b < 0) {
      demand_edges.emplace_back(v, net.add(v, target, -b, 0));
      demand -= b;
    }
  }
  if (supply != demand) {
    throw InfeasibleError("solve: total supply " + std::to_string(supply) +
                          " differs from total demand " + std::to_string(demand));
  }

  const std::int64_t sent = net.min_cost_flow(source, target, supply);
  if (sent < supply) {
    for (const auto& [v, edge] : demand_edges) {
      if (net.residual(edge) > 0) {
        throw InfeasibleError("solve: cannot satisfy " + describe_node(g, v));
      }
    }
    throw InfeasibleError("solve: supply cannot be routed");
  }

  FlowSolution out;
  out.flow.resize(g.arcs.size());
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    out.flow[a] = g.arcs[a].capacity - net.residual(arc_edge[a]);
  }
  out.objective = objective_of(g, out.flow);
  return out;
}

Value objective_of(const FlowGraph& g, std::span<const std::int64_t> flow) {
  Wide total = 0;
  for (std::size_t a = 0; a < g.arcs.size(); ++a) total += Wide{g.arcs[a].value} * flow[a];
  return clamp_value(total);
}

FlowSolution brute_force_oracle(const FlowGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<int> cameras;
  for (std::size_t v = 0; v < n; ++v) {
    if (g.nodes[v].kind == NodeKind::Camera) cameras.push_back(static_cast<int>(v));
  }
  if (static_cast<int>(cameras.size()) > kOracleMaxSlots) {
    throw SizeError("brute_force_oracle: " + std::to_string(cameras.size()) +
                    " camera-period slots exceed the limit of " +
                    std::to_string(kOracleMaxSlots));
  }

  std::vector<std::vector<int>> out_arcs(n);
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    out_arcs[static_cast<std::size_t>(g.arcs[a].from)].push_back(static_cast<int>(a));
  }
  // Non-camera nodes forward everything through their single outgoing arc.
  std::vector<int> next_arc(n, -1);
  std::vector<int> indegree(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const NodeKind kind = g.nodes[v].kind;
    if (kind == NodeKind::Camera) {
      if (g.nodes[v].balance != 1) {
        throw ConsistencyError("brute_force_oracle: camera nodes must supply one unit");
      }
      continue;
    }
    if (kind == NodeKind::Sink) continue;
    if (out_arcs[v].size() != 1) {
      throw ConsistencyError("brute_force_oracle: " + describe_node(g, static_cast<int>(v)) +
                             " needs exactly one outgoing arc");
    }
    next_arc[v] = out_arcs[v].front();
    ++indegree[static_cast<std::size_t>(g.arcs[static_cast<std::size_t>(next_arc[v])].to)];
  }

  std::vector<std::int64_t> through(n, 0);  // flow on next_arc[v]
  Wide running = 0;
  std::int64_t violations = 0;

  auto push = [&](int start, std::int64_t delta) {
    for (int v = start; g.nodes[static_cast<std::size_t>(v)].kind != NodeKind::Sink;) {
      const int a = next_arc[static_cast<std::size_t>(v)];
      const FlowArc& arc = g.arcs[static_cast<std::size_t>(a)];
      const bool was_over = through[static_cast<std::size_t>(v)] > arc.capacity;
      through[static_cast<std::size_t>(v)] += delta;
      const bool is_over = through[static_cast<std::size_t>(v)] > arc.capacity;
      violations += static_cast<std::int64_t>(is_over) - static_cast<std::int64_t>(was_over);
      running += Wide{arc.value} * delta;
      v = arc.to;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (next_arc[v] >= 0 && g.nodes[v].balance != 0) push(static_cast<int>(v), g.nodes[v].balance);
  }
  auto sink_inflow = [&]() {
    std::int64_t total = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (next_arc[v] >= 0 &&
          g.arcs[static_cast<std::size_t>(next_arc[v])].to == g.sink) {
        total += through[v];
      }
    }
    return total;
  };

  std::vector<int> choice(cameras.size(), -1);
  std::vector<int> best_choice;
  Wide best = 0;
  bool found = false;

  std::function<void(std::size_t)> search = [&](std::size_t slot) {
    if (slot == cameras.size()) {
      if (violations != 0) return;
      for (std::size_t v = 0; v < n; ++v) {
        if (next_arc[v] >= 0 && through[v] < 0) return;
      }
      std::int64_t idle = 0;
      for (std::size_t s = 0; s < cameras.size(); ++s) {
        if (g.arcs[static_cast<std::size_t>(choice[s])].to == g.sink) ++idle;
      }
      if (sink_inflow() + idle + g.nodes[static_cast<std::size_t>(g.sink)].balance != 0) return;
      if (!found || running > best) {
        found = true;
        best = running;
        best_choice = choice;
      }
      return;
    }
    const auto cam = static_cast<std::size_t>(cameras[slot]);
    for (int a : out_arcs[cam]) {
      const FlowArc& arc = g.arcs[static_cast<std::size_t>(a)];
      if (arc.capacity < 1) continue;
      choice[slot] = a;
      running += arc.value;
      const bool to_sink = arc.to == g.sink;
      if (!to_sink) push(arc.to, 1);
      if (violations == 0) search(slot + 1);
      if (!to_sink) push(arc.to, -1);
      running -= arc.value;
    }
    choice[slot] = -1;
  };
  search(0);

  if (!found) throw InfeasibleError("brute_force_oracle: no feasible camera assignment");

  // Replay the best assignment to recover every arc flow.
  FlowSolution out;
  out.flow.assign(g.arcs.size(), 0);
  for (int a : best_choice) {
    out.flow[static_cast<std::size_t>(a)] = 1;
    const FlowArc& arc = g.arcs[static_cast<std::size_t>(a)];
    if (arc.to != g.sink) push(arc.to, 1);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (next_arc[v] >= 0) out.flow[static_cast<std::size_t>(next_arc[v])] = through[v];
  }
  out.objective = clamp_value(best);
  return out;
}

Schedule extract_schedule(const FlowGraph& g, const FlowSolution& solution) {
  Schedule schedule;
  schedule.actions.assign(static_cast<std::size_t>(g.cameras),
                          std::vector<Action>(static_cast<std::size_t>(g.horizon)));
  std::vector<int> chosen(g.nodes.size(), 0);
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    const FlowArc& arc = g.arcs[a];
    const FlowNode& from = g.nodes[static_cast<std::size_t>(arc.from)];
    if (from.kind != NodeKind::Camera || solution.flow[a] <= 0) continue;
    if (solution.flow[a] != arc.capacity) {
      throw ConsistencyError("extract_schedule: partially used camera arc");
    }
    ++chosen[static_cast<std::size_t>(arc.from)];
    Action& action = schedule.actions[static_cast<std::size_t>(from.entity)]
                                     [static_cast<std::size_t>(from.time - 1)];
    const FlowNode& to = g.nodes[static_cast<std::size_t>(arc.to)];
    switch (arc.kind) {
      case ArcKind::CameraGroup: action = {Action::Kind::ObserveGroup, to.entity}; break;
      case ArcKind::CameraFixed: action = {Action::Kind::ObserveFixed, to.entity}; break;
      default: action = {Action::Kind::Idle, -1}; break;
    }
  }
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    if (g.nodes[v].kind == NodeKind::Camera && chosen[v] != 1) {
      throw ConsistencyError("extract_schedule: " + describe_node(g, static_cast<int>(v)) +
                             " has " + std::to_string(chosen[v]) + " saturated outgoing arcs");
    }
  }
  return schedule;
}

Value score_schedule(const FlowGraph& g, const Schedule& schedule) {
  Wide total = 0;
  for (const FlowArc& arc : g.arcs) {
    const FlowNode& from = g.nodes[static_cast<std::size_t>(arc.from)];
    if (from.kind != NodeKind::Camera) continue;
    const Action& action = schedule.at(from.entity, from.time);
    const FlowNode& to = g.nodes[static_cast<std::size_t>(arc.to)];
    const bool match =
        (action.kind == Action::Kind::ObserveGroup && arc.kind == ArcKind::CameraGroup &&
         to.entity == action.target) ||
        (action.kind == Action::Kind::ObserveFixed && arc.kind == ArcKind::CameraFixed &&
         to.entity == action.target) ||
        (action.kind == Action::Kind::Idle && arc.kind == ArcKind::CameraIdle);
    if (match) total += arc.value;
  }
  return clamp_value(total);
}

std::vector<std::int64_t> balance_residuals(const FlowGraph& g, const FlowSolution& solution) {
  std::vector<std::int64_t> residual(g.nodes.size());
  for (std::size_t v = 0; v < g.nodes.size(); ++v) residual[v] = g.nodes[v].balance;
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    residual[static_cast<std::size_t>(g.arcs[a].from)] -= solution.flow[a];
    residual[static_cast<std::size_t>(g.arcs[a].to)] += solution.flow[a];
  }
  return residual;
}

std::string dump_solution(const FlowGraph& g, const FlowSolution& solution) {
  std::istringstream graph_lines(dump_graph(g));
  std::ostringstream out;
  std::string line;
  std::size_t arc = 0;
  while (std::getline(graph_lines, line)) {
    out << line;
    if (line.rfind("A ", 0) == 0) out << ' ' << solution.flow[arc++];
    out << '\n';
  }
  out << "# objective " << solution.objective << '\n';
  return out.str();
}

}  // namespace ptzflow
