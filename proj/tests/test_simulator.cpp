#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "ptzflow/simulator.hpp"
#include "sim_helpers.hpp"

using namespace ptzflow;
using ptzflow::testing::parse_trace;
using ptzflow::testing::Record;

namespace {

ScenarioConfig small(PlannerKind kind, int pedestrians, std::uint64_t seed = 1) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  cfg.total_pedestrians = pedestrians;
  cfg.seed = seed;
  cfg.speed_min = 1.5;
  cfg.speed_max = 2.5;
  cfg.heading_jitter = 5.0 * kPi / 180.0;
  cfg.planner.group_radius = 5.0;
  return cfg;
}

Pedestrian walker(int id, double x, double y, double vx, double vy) {
  Pedestrian p;
  p.id = id;
  p.truth = {x, y, vx, vy};
  return p;
}

int count_events(const std::vector<Record>& records, const std::string& event) {
  int n = 0;
  for (const Record& r : records) n += r.event == event;
  return n;
}

}  // namespace

TEST_CASE("no arrivals at rate zero") {
  ScenarioConfig cfg;
  cfg.arrival_rate = 0.0;
  std::mt19937_64 rng(5);
  for (long f = 0; f < 1000; ++f) CHECK(spawn_pedestrians(cfg, rng, f, 0).empty());
}

TEST_CASE("arrival count matches the rate") {
  ScenarioConfig cfg;
  cfg.total_pedestrians = 1000000;
  std::mt19937_64 rng(11);
  int spawned = 0;
  for (long f = 0; f < 8100; ++f) {
    for (const Pedestrian& p : spawn_pedestrians(cfg, rng, f, spawned)) {
      CHECK(p.id == spawned);
      CHECK(p.truth.y == cfg.field.y1);
      CHECK(p.truth.vy < 0.0);
      const double speed = std::hypot(p.truth.vx, p.truth.vy);
      CHECK(speed >= cfg.speed_min - 1e-12);
      CHECK(speed <= cfg.speed_max + 1e-12);
      ++spawned;
    }
  }
  CHECK(spawned == doctest::Approx(405.0).epsilon(0.05));
}

TEST_CASE("arrivals stop at the total") {
  ScenarioConfig cfg;
  cfg.arrival_rate = 50.0;
  cfg.total_pedestrians = 7;
  std::mt19937_64 rng(2);
  CHECK(spawn_pedestrians(cfg, rng, 0, 4).size() == 3);
  CHECK(spawn_pedestrians(cfg, rng, 1, 7).empty());
}

TEST_CASE("step moves and logs exits") {
  ScenarioConfig cfg;
  cfg.walk_noise = 0.0;
  WorldState world;
  world.live = {walker(0, 150.0, 150.0, 0.0, -2.0), walker(1, 150.0, 0.5, 0.0, -2.0)};
  std::mt19937_64 rng(1);
  step_world(world, cfg, 0.5, rng);
  REQUIRE(world.live.size() == 1);
  CHECK(world.live[0].truth.x == 150.0);
  CHECK(world.live[0].truth.y == 149.0);
  CHECK(world.exited == 1);
  CHECK(world.trace == "t=0.500 event=exit id=1\n");
  CHECK_THROWS(step_world(world, cfg, 0.0, rng));
}

TEST_CASE("sensing creates and refines tracks") {
  ScenarioConfig cfg;
  cfg.walk_noise = 0.0;
  WorldState world;
  world.live = {walker(3, 100.0, 100.0, 0.0, -2.0)};
  CameraTask wide;
  wide.kind = CameraTask::Kind::WideStatic;
  wide.area = cfg.field;
  wide.sensing = true;
  CameraTask idle;
  idle.sensing = true;
  world.tasks = {wide, idle};
  std::mt19937_64 rng(1);
  step_world(world, cfg, 1.0 / 18.0, rng);
  REQUIRE(world.tracks.count(3) == 1);
  CHECK(world.first_detection.at(3) == doctest::Approx(1.0 / 18.0));
  CHECK(world.tasks[0].seen == std::set<int>{3});
  CHECK(world.tasks[1].seen.empty());
  for (int k = 0; k < 90; ++k) step_world(world, cfg, 1.0 / 18.0, rng);
  const Track& track = world.tracks.at(3);
  CHECK(track.state.vy == doctest::Approx(-2.0).epsilon(0.15));
  CHECK(std::abs(track.state.y - world.live[0].truth.y) < 1.0);
  CHECK(world.first_detection.at(3) == doctest::Approx(1.0 / 18.0));
}

TEST_CASE("detection noise has the configured variance") {
  ScenarioConfig cfg;
  const Pedestrian p = walker(0, 40.0, 60.0, 0.0, 0.0);
  std::mt19937_64 rng(99);
  const int n = 40000;
  double sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int k = 0; k < n; ++k) {
    const Observation o = detect(p, cfg, rng);
    sx += o.xc - 40.0;
    sy += o.yc - 60.0;
    sxx += (o.xc - 40.0) * (o.xc - 40.0);
    syy += (o.yc - 60.0) * (o.yc - 60.0);
  }
  CHECK(std::abs(sx / n) < 0.01);
  CHECK(std::abs(sy / n) < 0.01);
  CHECK(sxx / n == doctest::Approx(cfg.detection_noise).epsilon(0.03));
  CHECK(syy / n == doctest::Approx(cfg.detection_noise).epsilon(0.03));
}

TEST_CASE("a lone pedestrian is always watched") {
  for (PlannerKind kind :
       {PlannerKind::FlexibleGrouped, PlannerKind::Flexible, PlannerKind::MasterSlave}) {
    CAPTURE(to_string(kind));
    const RunResult r = run_scenario(small(kind, 1));
    CHECK(r.report.total == 1);
    CHECK(r.report.watched_ratio == 1.0);
    CHECK(r.report.avg_wait_s > 0.0);
  }
}

TEST_CASE("an empty scene still cycles the fixed regions") {
  const RunResult r = run_scenario(small(PlannerKind::FlexibleGrouped, 0));
  CHECK(r.report.empty());
  const auto records = parse_trace(r.trace);
  std::set<int> regions;
  for (const Record& rec : records) {
    CHECK(rec.event != "capture");
    if (rec.event == "fixed_look") regions.insert(rec.integer("region"));
  }
  CHECK(regions == std::set<int>{0, 1, 2});
}

TEST_CASE("runs conserve pedestrians and respect the schedule rules") {
  for (PlannerKind kind :
       {PlannerKind::FlexibleGrouped, PlannerKind::Flexible, PlannerKind::MasterSlave}) {
    CAPTURE(to_string(kind));
    const ScenarioConfig cfg = small(kind, 60, 4);
    const RunResult r = run_scenario(cfg);
    const auto records = parse_trace(r.trace);
    CHECK(count_events(records, "spawn") == 60);
    CHECK(count_events(records, "exit") == 60);

    std::set<int> spawned, captured;
    for (const Record& rec : records) {
      if (rec.event == "spawn") spawned.insert(rec.integer("id"));
      if (rec.event == "capture") {
        const int id = rec.integer("target");
        CHECK(spawned.count(id) == 1);
        CHECK(captured.insert(id).second);
        CHECK(rec.t >= std::stod(rec.fields.at("detected")));
      }
    }
    CHECK(r.report.captured == static_cast<int>(captured.size()));

    if (kind != PlannerKind::MasterSlave) {
      const double window_s = cfg.planner.window * cfg.planner.period_len;
      double end = 0.0;
      for (const Record& rec : records) end = std::max(end, rec.t);
      for (double start = 0.0; start + window_s <= end; start += window_s) {
        std::set<int> looked;
        for (const Record& rec : records) {
          if (rec.event == "fixed_look" && rec.t > start && rec.t <= start + window_s + 1e-9) {
            looked.insert(rec.integer("region"));
          }
        }
        CAPTURE(start);
        CHECK(looked.size() == 3);
      }
    }
  }
}

TEST_CASE("identical configs give identical traces") {
  const ScenarioConfig cfg = small(PlannerKind::FlexibleGrouped, 40, 8);
  const RunResult a = run_scenario(cfg);
  const RunResult b = run_scenario(cfg);
  CHECK(a.trace == b.trace);
  CHECK(emit(a.report, ReportFormat::Json) == emit(b.report, ReportFormat::Json));
  const RunResult c = run_scenario(small(PlannerKind::FlexibleGrouped, 40, 9));
  CHECK(a.trace != c.trace);
  CHECK(config_hash(cfg) == a.report.config_hash);
}
