#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ptzflow/metrics.hpp"

using namespace ptzflow;

namespace {

std::string trace_with(int spawned, std::initializer_list<std::pair<int, double>> captures) {
  std::string t = "# method=flexible seed=3 config=abc\n";
  for (int id = 0; id < spawned; ++id) {
    t += "t=0.000 event=spawn id=" + std::to_string(id) + " x=1 y=160 vx=0 vy=-2\n";
  }
  for (auto [id, wait] : captures) {
    char line[128];
    std::snprintf(line, sizeof line, "t=%.3f event=capture camera=0 target=%d detected=1.000\n",
                  1.0 + wait, id);
    t += line;
  }
  return t;
}

int columns(const std::string& line) {
  return static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("ratios and waits") {
  const MetricsReport r = compute_metrics(trace_with(4, {{0, 10.0}, {1, 20.0}, {2, 30.0}}));
  CHECK(r.method == "flexible");
  CHECK(r.seed == 3);
  CHECK(r.config_hash == "abc");
  CHECK(r.total == 4);
  CHECK(r.captured == 3);
  CHECK(r.watched_ratio == 0.75);
  CHECK(r.missed_ratio == 0.25);
  CHECK(r.avg_wait_s == doctest::Approx(20.0));
  CHECK(r.watched_ratio + r.missed_ratio == 1.0);
}

TEST_CASE("repeat captures count once") {
  const MetricsReport r = compute_metrics(trace_with(2, {{0, 4.0}, {0, 9.0}}));
  CHECK(r.captured == 1);
  CHECK(r.avg_wait_s == doctest::Approx(4.0));
}

TEST_CASE("empty trace gives the empty report") {
  CHECK(compute_metrics("").empty());
  CHECK(compute_metrics("# method=x seed=1 config=0\n").empty());
}

TEST_CASE("metrics are idempotent") {
  const std::string t = trace_with(7, {{3, 2.5}, {5, 7.25}});
  CHECK(compute_metrics(t) == compute_metrics(t));
}

TEST_CASE("csv has five columns") {
  const MetricsReport r = compute_metrics(trace_with(4, {{0, 10.0}}));
  std::istringstream in(emit(r, ReportFormat::Csv));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "method,watched_ratio,avg_wait_s,missed_ratio,seed");
  CHECK(columns(row) == 5);
  CHECK(row == "flexible,0.250000,10.0000,0.750000,3");
}

TEST_CASE("json round trip keeps every field") {
  MetricsReport r = compute_metrics(trace_with(9, {{0, 1.0 / 3.0}, {4, 7.1}}));
  const std::string text = emit(r, ReportFormat::Json);
  CHECK(text.find("\"method\"") < text.find("\"seed\""));
  CHECK(text.find("\"watched_ratio\"") < text.find("\"avg_wait_s\""));
  CHECK(report_from_json(text) == r);
  CHECK_THROWS(parse_format("xml"));
}

TEST_CASE("aggregate mean and sample std") {
  std::vector<MetricsReport> runs(3);
  const double watched[] = {0.9, 0.8, 1.0};
  const double waits[] = {10.0, 14.0, 18.0};
  for (int k = 0; k < 3; ++k) {
    runs[k].seed = static_cast<std::uint64_t>(k + 1);
    runs[k].watched_ratio = watched[k];
    runs[k].missed_ratio = 1.0 - watched[k];
    runs[k].avg_wait_s = waits[k];
  }
  const AggregateReport agg = aggregate("grouped", runs);
  CHECK(agg.mean.watched_ratio == doctest::Approx(0.9));
  CHECK(agg.stddev.watched_ratio == doctest::Approx(0.1));
  CHECK(agg.mean.avg_wait_s == doctest::Approx(14.0));
  CHECK(agg.stddev.avg_wait_s == doctest::Approx(4.0));

  const std::string csv = emit(std::vector<AggregateReport>{agg}, ReportFormat::Csv);
  CHECK(csv.find("grouped,0.900000,14.0000,0.100000,mean") != std::string::npos);
  CHECK(csv.find("grouped,0.100000,4.0000,0.100000,std") != std::string::npos);
  CHECK(aggregate("one", {runs[0]}).stddev.avg_wait_s == 0.0);
}
