#include <doctest.h>

#include "ptzflow/errors.hpp"
#include "ptzflow/scenario.hpp"

using namespace ptzflow;

TEST_CASE("defaults") {
  const ScenarioConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.cameras.size() == 3);
  CHECK(cfg.region_count() == 3);
  for (const CameraConfig& cam : cfg.cameras) {
    CHECK(cam.position.y == 0.0);
    CHECK(cam.height == 50.0);
  }
  CHECK(cfg.cameras[0].position.x == doctest::Approx(50.0));
  CHECK(cfg.cameras[2].position.x == doctest::Approx(250.0));
}

TEST_CASE("parse sections and fractions") {
  const ScenarioConfig cfg = parse_scenario(R"(
# comment
[scenario]
arrival_rate = 1/18
total_pedestrians = 450
seed = 9
[planner]
kind = master_slave
horizon = 8
window = 4
p_formula = printed
baseline = round_robin
[camera]
x = 10
y = 0
[camera]
x = 200
y = 0
max_zoom = 5
)");
  CHECK(cfg.arrival_rate == doctest::Approx(1.0 / 18.0));
  CHECK(cfg.total_pedestrians == 450);
  CHECK(cfg.seed == 9);
  CHECK(cfg.kind == PlannerKind::MasterSlave);
  CHECK(cfg.planner.horizon == 8);
  CHECK(cfg.planner.p_formula == PFormula::Printed);
  CHECK(cfg.baseline == BaselinePolicy::RoundRobin);
  REQUIRE(cfg.cameras.size() == 2);
  CHECK(cfg.cameras[1].max_zoom == 5.0);
}

TEST_CASE("bad configs are rejected") {
  CHECK_THROWS_AS(parse_scenario("[scenario]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[weather]\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[planner]\nhorizon = 7\nwindow = 5\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nspeed_min = 4\nspeed_max = 2\n").validate(),
                  ConfigError);
  CHECK_THROWS_AS(parse_planner_kind("greedy"), ConfigError);
}

TEST_CASE("hash ignores the seed but not the planner") {
  ScenarioConfig a, b;
  b.seed = 77;
  CHECK(a.canonical() == b.canonical());
  b.kind = PlannerKind::Flexible;
  CHECK(a.canonical() != b.canonical());
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("snapshot") {
  const Snapshot snap = parse_snapshot(R"(
[snapshot]
now = 12
window_phase = 2
region_satisfied = true,false,true
[track]
id = 4
x = 100
y = 80
vx = 0
vy = -3
[track]
id = 7
x = 20
y = 150
interrogated = true
)");
  CHECK(snap.now == 12.0);
  CHECK(snap.state.window_phase == 2);
  CHECK(snap.state.region_satisfied == std::vector<bool>{true, false, true});
  REQUIRE(snap.tracks.size() == 2);
  CHECK(snap.tracks[0].state.vy == -3.0);
  CHECK(snap.tracks[0].exit_time == doctest::Approx(12.0 + 80.0 / 3.0));
  CHECK(snap.tracks[1].interrogated);
}
