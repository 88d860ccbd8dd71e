#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ptzflow/camera_model.hpp"
#include "ptzflow/grouping.hpp"

namespace ptzflow {

using Value = std::int64_t;

// Arc values saturate here; sums of a few saturated values still fit in 64 bits.
inline constexpr Value kValueMax = Value{1} << 62;
inline constexpr int kMaxUrgencyExponent = 62;

// Departure classes and ranks of the groups in one planning call.
struct ValueContext {
  int horizon = 0;
  double now = 0.0;
  double period_len = 0.0;
  int departing_count = 0;  // N^e
  int staying_count = 0;    // N^s
  std::vector<bool> departing;  // per group index
  std::vector<int> rank;        // 1-based, within the group's class

  // Base urgency weight (N^s + 1) * H.
  Value base_weight() const;
};

ValueContext classify_and_rank(std::span<const GroupNode> groups, int horizon,
                               double period_len, double now);

Value fixed_value(int tracks_in_view, double angle);
Value staying_value(const ValueContext& ctx, int period, int rank, double angle, int group_size);
Value departing_value(const ValueContext& ctx, int rank, double angle, int group_size);

// Picks the staying or departing formula for group `index`.
Value group_value(const ValueContext& ctx, std::size_t index, int period, double angle,
                  int group_size);

struct FixedRegion {
  int id = 0;
  Rect bounds;
};

// Arc values indexed [camera][target][period - 1]. Missing group arcs mean the
// camera cannot take that group in that period.
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(int cameras, int groups, int regions, int horizon);

  int cameras() const { return cameras_; }
  int groups() const { return groups_; }
  int regions() const { return regions_; }
  int horizon() const { return horizon_; }

  std::optional<Value> group(int camera, int group, int period) const;
  Value fixed(int camera, int region, int period) const;

  void set_group(int camera, int group, int period, std::optional<Value> value);
  void set_fixed(int camera, int region, int period, Value value);

  friend bool operator==(const ValueTable&, const ValueTable&) = default;

 private:
  std::size_t group_slot(int camera, int group, int period) const;
  std::size_t fixed_slot(int camera, int region, int period) const;

  int cameras_ = 0;
  int groups_ = 0;
  int regions_ = 0;
  int horizon_ = 0;
  std::vector<Value> group_values_;
  std::vector<char> group_present_;
  std::vector<Value> fixed_values_;
};

struct ValueInputs {
  std::span<const CameraConfig> cameras;
  std::span<const GroupNode> groups;
  std::span<const FixedRegion> regions;
  const ValueContext* context = nullptr;
  Rect field;
  // Predicted track count per region and period, indexed [region][period - 1].
  std::span<const int> tracks_in_view;
};

// OpenMP over (camera, group) pairs; build_value_table_serial is the reference.
ValueTable build_value_table(const ValueInputs& in);
ValueTable build_value_table_serial(const ValueInputs& in);

// Count of predicted positions inside each region per period, [region][period - 1].
std::vector<int> count_in_regions(std::span<const FixedRegion> regions,
                                  std::span<const std::vector<Point2>> predictions,
                                  int horizon);

}  // namespace ptzflow
