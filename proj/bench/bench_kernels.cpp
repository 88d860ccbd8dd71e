// Serial reference vs OpenMP kernels, plus one full solve at planning size.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ptzflow/flow_model.hpp"
#include "ptzflow/planner.hpp"
#include "ptzflow/scenario.hpp"
#include "ptzflow/solver.hpp"

using namespace ptzflow;

namespace {

struct Crowd {
  std::vector<int> ids;
  std::vector<Point2> positions;
};

Crowd crowd(int n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> x(0.0, 300.0), y(0.0, 160.0);
  Crowd c;
  for (int k = 0; k < n; ++k) {
    c.ids.push_back(k);
    c.positions.push_back({x(rng), y(rng)});
  }
  return c;
}

struct ValueSetup {
  ScenarioConfig cfg;
  Scene scene;
  std::vector<GroupNode> groups;
  ValueContext context;
  std::vector<int> in_view;
};

ValueSetup value_setup(int n) {
  ValueSetup s;
  s.scene = s.cfg.scene();
  const Crowd c = crowd(n);
  std::vector<Track> tracks;
  for (int k = 0; k < n; ++k) {
    Track t;
    t.id = k;
    t.state = {c.positions[static_cast<std::size_t>(k)].x, c.positions[static_cast<std::size_t>(k)].y,
               0.0, -2.0};
    t.exit_time = predict_exit_time(t.state, s.cfg.field, 0.0);
    tracks.push_back(t);
  }
  s.cfg.planner.grouped = false;
  s.groups = form_groups(tracks, s.scene, s.cfg.planner, 0.0);
  s.context = classify_and_rank(s.groups, s.cfg.planner.horizon, s.cfg.planner.period_len, 0.0);
  s.in_view.assign(s.scene.regions.size() * static_cast<std::size_t>(s.cfg.planner.horizon), 1);
  return s;
}

ValueInputs inputs_of(const ValueSetup& s) {
  ValueInputs in;
  in.cameras = s.scene.cameras;
  in.groups = s.groups;
  in.regions = s.scene.regions;
  in.context = &s.context;
  in.field = s.scene.field;
  in.tracks_in_view = s.in_view;
  return in;
}

void BM_CandidatesSerial(benchmark::State& state) {
  const Crowd c = crowd(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(candidate_coverages_serial(c.ids, c.positions, 6.0));
}

void BM_CandidatesParallel(benchmark::State& state) {
  const Crowd c = crowd(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(candidate_coverages(c.ids, c.positions, 6.0));
}

void BM_ValuesSerial(benchmark::State& state) {
  const ValueSetup s = value_setup(static_cast<int>(state.range(0)));
  const ValueInputs in = inputs_of(s);
  for (auto _ : state) benchmark::DoNotOptimize(build_value_table_serial(in));
}

void BM_ValuesParallel(benchmark::State& state) {
  const ValueSetup s = value_setup(static_cast<int>(state.range(0)));
  const ValueInputs in = inputs_of(s);
  for (auto _ : state) benchmark::DoNotOptimize(build_value_table(in));
}

void BM_Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Value> value(1, 1 << 20);
  ValueTable table(3, n, 3, 10);
  for (int i = 0; i < 3; ++i) {
    for (int t = 1; t <= 10; ++t) {
      for (int j = 0; j < n; ++j) table.set_group(i, j, t, value(rng));
      for (int k = 0; k < 3; ++k) table.set_fixed(i, k, t, value(rng) % 16);
    }
  }
  const FlowGraph g = build_graph(table, 10, 5);
  state.counters["nodes"] = static_cast<double>(g.nodes.size());
  state.counters["arcs"] = static_cast<double>(g.arcs.size());
  for (auto _ : state) benchmark::DoNotOptimize(solve(g));
}

}  // namespace

BENCHMARK(BM_CandidatesSerial)->Arg(50)->Arg(200)->Arg(800);
BENCHMARK(BM_CandidatesParallel)->Arg(50)->Arg(200)->Arg(800);
BENCHMARK(BM_ValuesSerial)->Arg(30)->Arg(120);
BENCHMARK(BM_ValuesParallel)->Arg(30)->Arg(120);
BENCHMARK(BM_Solve)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
