#include "ptzflow/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ptzflow {

namespace {

using Fields = std::map<std::string, std::string, std::less<>>;

Fields split_fields(std::string_view line) {
  Fields fields;
  std::istringstream in{std::string(line)};
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    fields.emplace(token.substr(0, eq), token.substr(eq + 1));
  }
  return fields;
}

double number(const Fields& f, std::string_view key) {
  auto it = f.find(key);
  if (it == f.end()) throw std::invalid_argument("trace record lacks '" + std::string(key) + "'");
  return std::stod(it->second);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["seed"] = r.seed;
  j["config_hash"] = r.config_hash;
  j["total"] = r.total;
  j["captured"] = r.captured;
  j["watched_ratio"] = r.watched_ratio;
  j["avg_wait_s"] = r.avg_wait_s;
  j["missed_ratio"] = r.missed_ratio;
  return j;
}

nlohmann::ordered_json to_json(const Summary& s) {
  nlohmann::ordered_json j;
  j["watched_ratio"] = s.watched_ratio;
  j["avg_wait_s"] = s.avg_wait_s;
  j["missed_ratio"] = s.missed_ratio;
  return j;
}

std::string csv_row(const std::string& method, const Summary& s, const std::string& seed) {
  return method + ',' + fixed(s.watched_ratio, 6) + ',' + fixed(s.avg_wait_s, 4) + ',' +
         fixed(s.missed_ratio, 6) + ',' + seed + '\n';
}

Summary summary_of(const MetricsReport& r) { return {r.watched_ratio, r.avg_wait_s, r.missed_ratio}; }

constexpr std::string_view kCsvHeader = "method,watched_ratio,avg_wait_s,missed_ratio,seed\n";

}  // namespace

MetricsReport compute_metrics(std::string_view trace) {
  MetricsReport report;
  std::set<int> spawned;
  std::map<int, double> waits;
  std::istringstream in{std::string(trace)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Fields f = split_fields(line);
    if (line.front() == '#') {
      if (auto it = f.find("method"); it != f.end()) report.method = it->second;
      if (auto it = f.find("seed"); it != f.end()) report.seed = std::stoull(it->second);
      if (auto it = f.find("config"); it != f.end()) report.config_hash = it->second;
      continue;
    }
    auto event = f.find("event");
    if (event == f.end()) continue;
    if (event->second == "spawn") {
      spawned.insert(static_cast<int>(number(f, "id")));
    } else if (event->second == "capture") {
      const int target = static_cast<int>(number(f, "target"));
      // First capture counts; later looks at the same pedestrian add nothing.
      waits.emplace(target, number(f, "t") - number(f, "detected"));
    }
  }
  report.total = static_cast<int>(spawned.size());
  report.captured = static_cast<int>(waits.size());
  if (report.empty()) return report;

  report.watched_ratio = static_cast<double>(report.captured) / report.total;
  report.missed_ratio = static_cast<double>(report.total - report.captured) / report.total;
  if (!waits.empty()) {
    double sum = 0.0;
    for (const auto& [id, wait] : waits) sum += wait;
    report.avg_wait_s = sum / static_cast<double>(waits.size());
  }
  return report;
}

ReportFormat parse_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw std::invalid_argument("unknown report format '" + std::string(text) +
                              "' (expected json or csv)");
}

std::string emit(const MetricsReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(report).dump(2) + '\n';
  return std::string(kCsvHeader) +
         csv_row(report.method, summary_of(report), std::to_string(report.seed));
}

MetricsReport report_from_json(std::string_view json) {
  const auto j = nlohmann::json::parse(json);
  MetricsReport r;
  r.method = j.at("method").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.total = j.at("total").get<int>();
  r.captured = j.at("captured").get<int>();
  r.watched_ratio = j.at("watched_ratio").get<double>();
  r.avg_wait_s = j.at("avg_wait_s").get<double>();
  r.missed_ratio = j.at("missed_ratio").get<double>();
  return r;
}

AggregateReport aggregate(std::string method, std::vector<MetricsReport> runs) {
  AggregateReport agg;
  agg.method = std::move(method);
  agg.runs = std::move(runs);
  const auto n = static_cast<double>(agg.runs.size());
  if (agg.runs.empty()) return agg;

  auto field_stats = [&](auto get, double& mean, double& sd) {
    double sum = 0.0;
    for (const auto& r : agg.runs) sum += get(r);
    mean = sum / n;
    if (agg.runs.size() < 2) {
      sd = 0.0;
      return;
    }
    double sq = 0.0;
    for (const auto& r : agg.runs) sq += (get(r) - mean) * (get(r) - mean);
    sd = std::sqrt(sq / (n - 1.0));
  };
  field_stats([](const MetricsReport& r) { return r.watched_ratio; }, agg.mean.watched_ratio,
              agg.stddev.watched_ratio);
  field_stats([](const MetricsReport& r) { return r.avg_wait_s; }, agg.mean.avg_wait_s,
              agg.stddev.avg_wait_s);
  field_stats([](const MetricsReport& r) { return r.missed_ratio; }, agg.mean.missed_ratio,
              agg.stddev.missed_ratio);
  return agg;
}

std::string emit(const std::vector<AggregateReport>& reports, ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    for (const AggregateReport& agg : reports) {
      nlohmann::ordered_json j;
      j["method"] = agg.method;
      j["runs"] = nlohmann::ordered_json::array();
      for (const auto& r : agg.runs) j["runs"].push_back(to_json(r));
      j["mean"] = to_json(agg.mean);
      j["std"] = to_json(agg.stddev);
      all.push_back(std::move(j));
    }
    return all.dump(2) + '\n';
  }
  std::string out(kCsvHeader);
  for (const AggregateReport& agg : reports) {
    for (const auto& r : agg.runs) out += csv_row(agg.method, summary_of(r), std::to_string(r.seed));
    out += csv_row(agg.method, agg.mean, "mean");
    out += csv_row(agg.method, agg.stddev, "std");
  }
  return out;
}

}  // namespace ptzflow
