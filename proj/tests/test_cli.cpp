#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptzflow/cli.hpp"

using namespace ptzflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ptzflow_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path path = dir / "scene.cfg";
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kTiny =
    "[scenario]\ntotal_pedestrians = 12\nspeed_min = 1.5\nspeed_max = 2.5\n"
    "[planner]\ngroup_radius = 5\n";

}  // namespace

TEST_CASE("missing config is a usage error") {
  std::ostringstream out, err;
  RunOptions opts;
  opts.config = "/nonexistent/scene.cfg";
  CHECK(cmd_run(opts, out, err) == kExitUsage);
  CHECK(err.str().find("not found") != std::string::npos);
  CHECK(cmd_plan("/nonexistent/snap.cfg", out, err) == kExitUsage);
}

TEST_CASE("validate") {
  std::ostringstream out, err;
  ValidateOptions opts;
  opts.trials = 0;
  CHECK(cmd_validate(opts, out, err) == kExitOk);
  CHECK(out.str() == "validated 0/0 instances\n");

  opts.trials = 50;
  ValidateSummary summary;
  out.str("");
  CHECK(cmd_validate(opts, out, err, &summary) == kExitOk);
  CHECK(summary.matched == 50);
  CHECK(summary.balanced == 50);

  opts.corrupt = true;
  std::ostringstream bad_out, bad_err;
  CHECK(cmd_validate(opts, bad_out, bad_err) == kExitValidation);
  CHECK(bad_err.str().find("mismatch on trial") != std::string::npos);
  CHECK(bad_err.str().find("\nN 0 camera") != std::string::npos);

  opts.corrupt = false;
  opts.max_cameras = 0;
  CHECK(cmd_validate(opts, out, err) == kExitUsage);
}

TEST_CASE("random instances stay within the oracle limit") {
  std::mt19937_64 rng(3);
  const ValidateOptions limits;
  for (int k = 0; k < 100; ++k) {
    const RandomInstance inst = random_instance(rng, limits);
    CHECK(inst.values.cameras() * inst.horizon <= 12);
    CHECK(inst.horizon % inst.window == 0);
    CHECK(inst.state.window_phase < inst.window);
  }
}

TEST_CASE("plan on a snapshot") {
  const fs::path snap = fs::path(PTZFLOW_SOURCE_DIR) / "scenarios" / "snapshot_example.cfg";
  std::ostringstream out, err;
  REQUIRE(cmd_plan(snap, out, err) == kExitOk);
  const std::string text = out.str();
  CHECK(text.rfind("graph nodes=", 0) == 0);
  CHECK(text.find("group 0 members=11,12") != std::string::npos);
  CHECK(text.find("camera 2:") != std::string::npos);
  std::ostringstream again;
  cmd_plan(snap, again, err);
  CHECK(again.str() == text);
}

TEST_CASE("run writes trace and report") {
  const fs::path dir = scratch("run");
  RunOptions opts;
  opts.config = write_config(dir, kTiny);
  opts.out = dir;
  opts.seed = 5;
  opts.format = ReportFormat::Csv;
  opts.planner = PlannerKind::Flexible;
  std::ostringstream out, err;
  REQUIRE(cmd_run(opts, out, err) == kExitOk);
  CHECK(fs::exists(dir / "flexible_seed5.trace"));
  CHECK(slurp(dir / "flexible_seed5.metrics.csv") == out.str());
  CHECK(out.str().find("flexible,") != std::string::npos);
}

TEST_CASE("compare aggregates every method and reruns identically") {
  const fs::path a = scratch("cmp_a");
  const fs::path b = scratch("cmp_b");
  RunOptions opts;
  opts.config = write_config(a, kTiny);
  opts.seeds = 2;
  opts.format = ReportFormat::Csv;
  std::ostringstream out_a, out_b, err;
  opts.out = a;
  REQUIRE(cmd_compare(opts, out_a, err) == kExitOk);
  opts.out = b;
  REQUIRE(cmd_compare(opts, out_b, err) == kExitOk);
  CHECK(out_a.str() == out_b.str());
  for (const char* method : {"flexible_grouped", "flexible", "master_slave"}) {
    for (int seed : {1, 2}) {
      const std::string base = run_basename(method, seed);
      CHECK(slurp(a / (base + ".trace")) == slurp(b / (base + ".trace")));
      CHECK(slurp(a / (base + ".metrics.csv")) == slurp(b / (base + ".metrics.csv")));
    }
    CHECK(out_a.str().find(std::string(method) + ",") != std::string::npos);
  }
  CHECK(slurp(a / "compare.csv") == out_a.str());

  opts.seeds = 0;
  CHECK(cmd_compare(opts, out_a, err) == kExitUsage);
}
