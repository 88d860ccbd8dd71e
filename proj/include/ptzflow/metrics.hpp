#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ptzflow {

struct MetricsReport {
  std::string method;
  std::uint64_t seed = 0;
  std::string config_hash;
  int total = 0;     // pedestrians that entered
  int captured = 0;  // pedestrians interrogated at least once
  double watched_ratio = 0.0;
  double missed_ratio = 0.0;
  double avg_wait_s = 0.0;  // over captured pedestrians only
  double runtime_s = 0.0;   // wall clock; not part of emitted files

  bool empty() const { return total == 0; }
  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Metrics from trace records. `# key=value` header lines set method/seed/config.
// An empty trace yields the empty report.
MetricsReport compute_metrics(std::string_view trace);

enum class ReportFormat { Json, Csv };

ReportFormat parse_format(std::string_view text);

// CSV: `method,watched_ratio,avg_wait_s,missed_ratio,seed`. JSON keys in fixed order.
std::string emit(const MetricsReport& report, ReportFormat format);
MetricsReport report_from_json(std::string_view json);

struct Summary {
  double watched_ratio = 0.0;
  double avg_wait_s = 0.0;
  double missed_ratio = 0.0;
};

// Per-seed runs of one method with mean and sample standard deviation.
struct AggregateReport {
  std::string method;
  std::vector<MetricsReport> runs;
  Summary mean;
  Summary stddev;
};

AggregateReport aggregate(std::string method, std::vector<MetricsReport> runs);

// One CSV table (or JSON array) holding every method's per-seed rows plus
// mean/std rows, whose seed column reads `mean` or `std`.
std::string emit(const std::vector<AggregateReport>& reports, ReportFormat format);

}  // namespace ptzflow
