#include "ptzflow/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "ptzflow/errors.hpp"
#include "ptzflow/simulator.hpp"
#include "ptzflow/solver.hpp"

namespace ptzflow {

namespace {

constexpr PlannerKind kCompareOrder[] = {PlannerKind::FlexibleGrouped, PlannerKind::Flexible,
                                         PlannerKind::MasterSlave};

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

void write_run(const std::filesystem::path& dir, const RunResult& result, ReportFormat format) {
  const std::string base = run_basename(result.report.method, result.report.seed);
  write_file_atomic(dir / (base + ".trace"), result.trace);
  write_file_atomic(dir / (base + ".metrics." + std::string(extension(format))),
                    emit(result.report, format));
}

ScenarioConfig load_for(const RunOptions& opts, std::uint64_t seed) {
  if (!std::filesystem::exists(opts.config)) {
    throw ConfigError("config file not found: " + opts.config.string());
  }
  ScenarioConfig cfg = load_scenario(opts.config);
  cfg.seed = seed;
  if (opts.planner) cfg.kind = *opts.planner;
  cfg.validate();
  return cfg;
}

const char* action_text(const Action& action, char* buf, std::size_t size) {
  switch (action.kind) {
    case Action::Kind::Idle: return "idle";
    case Action::Kind::ObserveGroup: std::snprintf(buf, size, "group %d", action.target); break;
    case Action::Kind::ObserveFixed: std::snprintf(buf, size, "fixed %d", action.target); break;
  }
  return buf;
}

}  // namespace

std::string_view extension(ReportFormat format) {
  return format == ReportFormat::Json ? "json" : "csv";
}

std::string run_basename(std::string_view method, std::uint64_t seed) {
  return std::string(method) + "_seed" + std::to_string(seed);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

RandomInstance random_instance(std::mt19937_64& rng, const ValidateOptions& limits) {
  for (;;) {
    RandomInstance inst;
    const int l = uniform(rng, 1, std::max(1, limits.max_cameras));
    const int n = uniform(rng, 0, std::max(0, limits.max_groups));
    const int m = uniform(rng, 0, std::max(0, limits.max_regions));
    inst.horizon = uniform(rng, 1, std::max(1, limits.max_horizon));
    std::vector<int> divisors;
    for (int d = 1; d <= inst.horizon; ++d)
      if (inst.horizon % d == 0) divisors.push_back(d);
    inst.window = divisors[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(divisors.size()) - 1))];
    if (feasibility_check(inst.horizon, inst.window, l, m, n)) continue;
    if (l * inst.horizon > kOracleMaxSlots) continue;

    inst.state.window_phase = uniform(rng, 0, inst.window - 1);
    int open = 0;
    for (int k = 0; k < m; ++k) {
      const bool done = inst.state.window_phase > 0 && uniform(rng, 0, 2) == 0;
      inst.state.region_satisfied.push_back(done);
      open += done ? 0 : 1;
    }
    // a partial first window must still fit the regions left to look at
    const int first_len = std::min(inst.horizon, inst.window - inst.state.window_phase);
    for (int k = 0; k < m && open > l * first_len; ++k) {
      if (!inst.state.region_satisfied[static_cast<std::size_t>(k)]) {
        inst.state.region_satisfied[static_cast<std::size_t>(k)] = true;
        --open;
      }
    }
    for (int j = 0; j < n; ++j) inst.state.group_interrogated.push_back(uniform(rng, 0, 4) == 0);

    inst.values = ValueTable(l, n, m, inst.horizon);
    for (int i = 0; i < l; ++i) {
      for (int t = 1; t <= inst.horizon; ++t) {
        for (int j = 0; j < n; ++j) {
          if (uniform(rng, 0, 4) != 0) inst.values.set_group(i, j, t, uniform(rng, 0, 60));
        }
        for (int k = 0; k < m; ++k) inst.values.set_fixed(i, k, t, uniform(rng, 0, 20));
      }
    }
    return inst;
  }
}

bool schedule_respects_constraints(const FlowGraph& g, const FlowSolution& sol) {
  std::vector<std::int64_t> out_flow(g.nodes.size(), 0), in_flow(g.nodes.size(), 0);
  std::vector<std::int64_t> captures(static_cast<std::size_t>(g.groups), 0);
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    const FlowArc& arc = g.arcs[a];
    const std::int64_t f = sol.flow[a];
    if (f < 0 || f > arc.capacity) return false;
    out_flow[static_cast<std::size_t>(arc.from)] += f;
    in_flow[static_cast<std::size_t>(arc.to)] += f;
    if (arc.kind == ArcKind::CameraGroup) {
      captures[static_cast<std::size_t>(g.nodes[static_cast<std::size_t>(arc.to)].entity)] += f;
    }
  }
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const FlowNode& node = g.nodes[v];
    if (node.kind == NodeKind::Camera && out_flow[v] != 1) return false;
    if (node.kind == NodeKind::GroupLoc && node.time == 1) {
      if (captures[static_cast<std::size_t>(node.entity)] + node.balance > 1) return false;
    }
    if (node.kind == NodeKind::Demand && in_flow[v] < -node.balance) return false;
  }
  return true;
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioConfig cfg = load_for(opts, opts.seed);
    const RunResult result = run_scenario(cfg);
    write_run(opts.out, result, opts.format);
    out << emit(result.report, opts.format);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

int cmd_compare(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.seeds < 1) {
    err << "error: --seeds must be at least 1\n";
    return kExitUsage;
  }
  std::vector<ScenarioConfig> jobs;
  try {
    for (int s = 0; s < opts.seeds; ++s) {
      for (PlannerKind kind : kCompareOrder) {
        RunOptions one = opts;
        one.planner = kind;
        jobs.push_back(load_for(one, opts.seed + static_cast<std::uint64_t>(s)));
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<RunResult> results(jobs.size());
  std::vector<std::string> failures(jobs.size());
  const int count = static_cast<int>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < count; ++k) {
    try {
      results[static_cast<std::size_t>(k)] = run_scenario(jobs[static_cast<std::size_t>(k)]);
      write_run(opts.out, results[static_cast<std::size_t>(k)], opts.format);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(k)] = e.what();
    }
  }
  for (const std::string& failure : failures) {
    if (!failure.empty()) {
      err << "error: " << failure << '\n';
      return kExitUsage;
    }
  }

  std::vector<AggregateReport> table;
  for (std::size_t m = 0; m < std::size(kCompareOrder); ++m) {
    std::vector<MetricsReport> runs;
    for (int s = 0; s < opts.seeds; ++s) {
      runs.push_back(results[static_cast<std::size_t>(s) * std::size(kCompareOrder) + m].report);
    }
    table.push_back(aggregate(std::string(to_string(kCompareOrder[m])), std::move(runs)));
  }
  const std::string text = emit(table, opts.format);
  try {
    write_file_atomic(opts.out / ("compare." + std::string(extension(opts.format))), text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  out << text;
  return kExitOk;
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err,
                 ValidateSummary* summary) {
  if (opts.max_cameras < 1 || opts.max_horizon < 1 || opts.max_groups < 0 ||
      opts.max_regions < 0 || opts.trials < 0) {
    err << "error: size limits must be positive and trials non-negative\n";
    return kExitUsage;
  }
  if (opts.max_cameras > kOracleMaxSlots) {
    err << "error: oracle supports at most " << kOracleMaxSlots << " camera-periods\n";
    return kExitUsage;
  }
  std::mt19937_64 rng(opts.seed);
  ValidateSummary tally;
  for (int trial = 0; trial < opts.trials; ++trial) {
    const RandomInstance inst = random_instance(rng, opts);
    const FlowGraph graph = build_graph(inst.values, inst.horizon, inst.window, inst.state);
    FlowGraph solved_graph = graph;
    if (opts.corrupt) {
      for (FlowArc& arc : solved_graph.arcs) {
        if (arc.kind == ArcKind::CameraGroup || arc.kind == ArcKind::CameraFixed) {
          arc.value += 1000;
          break;
        }
      }
    }
    ++tally.trials;

    std::optional<FlowSolution> fast, exact;
    try {
      fast = solve(solved_graph);
    } catch (const InfeasibleError&) {
    }
    try {
      exact = brute_force_oracle(graph);
    } catch (const InfeasibleError&) {
    }
    bool ok = fast.has_value() == exact.has_value();
    if (ok && fast) {
      const Value rescored = objective_of(graph, fast->flow);
      ok = fast->objective == exact->objective && rescored == exact->objective;
      bool integral = fast->flow.size() == graph.arcs.size();
      for (std::size_t a = 0; integral && a < graph.arcs.size(); ++a) {
        integral = fast->flow[a] >= 0 && fast->flow[a] <= graph.arcs[a].capacity;
      }
      const auto residuals = balance_residuals(graph, *fast);
      const bool balanced = std::all_of(residuals.begin(), residuals.end(),
                                        [](std::int64_t r) { return r == 0; });
      const bool constrained = schedule_respects_constraints(graph, *fast);
      tally.integral += integral;
      tally.balanced += balanced;
      tally.checked_constraints += constrained;
      ok = ok && integral && balanced && constrained;
    } else if (ok) {
      ++tally.integral;
      ++tally.balanced;
      ++tally.checked_constraints;
    }
    if (!ok) {
      err << "mismatch on trial " << trial << ": solver "
          << (fast ? std::to_string(fast->objective) : "infeasible") << ", oracle "
          << (exact ? std::to_string(exact->objective) : "infeasible") << '\n'
          << dump_graph(graph);
      if (summary) *summary = tally;
      return kExitValidation;
    }
    ++tally.matched;
  }
  out << "validated " << tally.matched << "/" << tally.trials << " instances\n";
  if (summary) *summary = tally;
  return kExitOk;
}

int cmd_plan(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
  try {
    if (!std::filesystem::exists(path)) throw ConfigError("snapshot not found: " + path.string());
    const Snapshot snap = load_snapshot(path);
    snap.config.validate();
    PlannerConfig planner = snap.config.planner;
    planner.grouped = snap.config.kind != PlannerKind::Flexible;
    const Scene scene = snap.config.scene();
    const Plan plan = make_plan(scene, planner, snap.now, snap.tracks, snap.state);

    out << "graph nodes=" << plan.graph.nodes.size() << " arcs=" << plan.graph.arcs.size()
        << " groups=" << plan.groups.size() << " objective=" << plan.solution.objective << '\n';
    for (const GroupNode& group : plan.groups) {
      out << "group " << group.id << " members=";
      for (std::size_t k = 0; k < group.member_ids.size(); ++k) {
        out << (k ? "," : "") << group.member_ids[k];
      }
      char buf[96];
      std::snprintf(buf, sizeof buf, " focus=(%.2f,%.2f) exit=%.2f\n", group.focus.x,
                    group.focus.y, group.exit_time);
      out << buf;
    }
    for (int cam = 0; cam < static_cast<int>(scene.cameras.size()); ++cam) {
      out << "camera " << cam << ':';
      for (int t = 1; t <= planner.horizon; ++t) {
        char buf[32];
        out << " [" << t << "] " << action_text(plan.schedule.at(cam, t), buf, sizeof buf);
      }
      out << '\n';
    }
    return kExitOk;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace ptzflow
