#include "ptzflow/valuation.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace ptzflow {

namespace {

std::atomic<bool> saturation_reported{false};

Value saturate() {
  if (!saturation_reported.exchange(true)) {
    spdlog::warn("arc value saturated at 2^62; urgency ordering among top ranks is lost");
  }
  return kValueMax;
}

Value sat_add(Value a, Value b) {
  Value out = 0;
  if (__builtin_add_overflow(a, b, &out) || out > kValueMax) return saturate();
  return out;
}

Value sat_mul(Value a, Value b) {
  Value out = 0;
  if (__builtin_mul_overflow(a, b, &out) || out > kValueMax) return saturate();
  return out;
}

void fill_camera_group(const ValueInputs& in, ValueTable& table, int camera, int group) {
  const CameraConfig& cam = in.cameras[static_cast<std::size_t>(camera)];
  const GroupNode& node = in.groups[static_cast<std::size_t>(group)];
  for (int t = 1; t <= table.horizon(); ++t) {
    const Point2 focus = node.focus_per_period[static_cast<std::size_t>(t - 1)];
    if (!in.field.contains(focus) || !reachable(cam, focus)) {
      table.set_group(camera, group, t, std::nullopt);
      continue;
    }
    const double angle = track_sight_angle(cam, focus, node.velocity);
    table.set_group(camera, group, t,
                    group_value(*in.context, static_cast<std::size_t>(group), t, angle,
                                node.size()));
  }
}

void fill_camera_fixed(const ValueInputs& in, ValueTable& table, int camera) {
  const CameraConfig& cam = in.cameras[static_cast<std::size_t>(camera)];
  for (int r = 0; r < table.regions(); ++r) {
    const double angle =
        sight_angle(cam, in.regions[static_cast<std::size_t>(r)].bounds.center(), kNorth);
    for (int t = 1; t <= table.horizon(); ++t) {
      const int seen =
          in.tracks_in_view[static_cast<std::size_t>(r * table.horizon() + (t - 1))];
      table.set_fixed(camera, r, t, fixed_value(seen, angle));
    }
  }
}

void check_inputs(const ValueInputs& in) {
  if (in.context == nullptr) throw std::invalid_argument("build_value_table: missing context");
  const int horizon = in.context->horizon;
  if (in.tracks_in_view.size() != in.regions.size() * static_cast<std::size_t>(horizon)) {
    throw std::invalid_argument("build_value_table: tracks_in_view has the wrong size");
  }
  for (const GroupNode& g : in.groups) {
    if (g.focus_per_period.size() != static_cast<std::size_t>(horizon)) {
      throw std::invalid_argument("build_value_table: group focus does not span the horizon");
    }
  }
}

ValueTable empty_table(const ValueInputs& in) {
  return ValueTable(static_cast<int>(in.cameras.size()), static_cast<int>(in.groups.size()),
                    static_cast<int>(in.regions.size()), in.context->horizon);
}

}  // namespace

Value ValueContext::base_weight() const {
  return static_cast<Value>(staying_count + 1) * horizon;
}

ValueContext classify_and_rank(std::span<const GroupNode> groups, int horizon,
                               double period_len, double now) {
  ValueContext ctx;
  ctx.horizon = horizon;
  ctx.now = now;
  ctx.period_len = period_len;
  ctx.departing.assign(groups.size(), false);
  ctx.rank.assign(groups.size(), 0);

  const double horizon_end = now + horizon * period_len;
  std::vector<std::size_t> leaving;
  std::vector<std::size_t> staying;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    ctx.departing[g] = groups[g].exit_time < horizon_end;
    (ctx.departing[g] ? leaving : staying).push_back(g);
  }
  auto by_exit = [&](std::size_t a, std::size_t b) {
    if (groups[a].exit_time != groups[b].exit_time) {
      return groups[a].exit_time < groups[b].exit_time;
    }
    return groups[a].id < groups[b].id;
  };
  std::sort(leaving.begin(), leaving.end(), by_exit);
  std::sort(staying.begin(), staying.end(), by_exit);
  for (std::size_t k = 0; k < leaving.size(); ++k) ctx.rank[leaving[k]] = static_cast<int>(k) + 1;
  for (std::size_t k = 0; k < staying.size(); ++k) ctx.rank[staying[k]] = static_cast<int>(k) + 1;
  ctx.departing_count = static_cast<int>(leaving.size());
  ctx.staying_count = static_cast<int>(staying.size());
  return ctx;
}

Value fixed_value(int tracks_in_view, double angle) {
  if (tracks_in_view < 0) throw std::invalid_argument("fixed_value: negative track count");
  return static_cast<Value>(tracks_in_view) + quality_value(angle);
}

Value staying_value(const ValueContext& ctx, int period, int rank, double angle,
                    int group_size) {
  if (rank < 1 || rank > ctx.staying_count) {
    throw std::invalid_argument("staying_value: rank out of range");
  }
  if (period < 1 || period > ctx.horizon) {
    throw std::invalid_argument("staying_value: period out of range");
  }
  const Value ns = ctx.staying_count;
  Value bracket = sat_mul(ns + 1, ctx.horizon - (period - 1));
  bracket = sat_add(bracket, ns - rank + quality_value(angle));
  return sat_mul(bracket, group_size);
}

Value departing_value(const ValueContext& ctx, int rank, double angle, int group_size) {
  if (rank < 1 || rank > ctx.departing_count) {
    throw std::invalid_argument("departing_value: rank out of range");
  }
  int exponent = ctx.departing_count + 1 - rank;
  Value urgency = 0;
  if (exponent > kMaxUrgencyExponent) {
    urgency = saturate();
  } else {
    urgency = sat_mul(ctx.base_weight(), Value{1} << exponent);
  }
  return sat_mul(sat_add(urgency, quality_value(angle)), group_size);
}

Value group_value(const ValueContext& ctx, std::size_t index, int period, double angle,
                  int group_size) {
  if (ctx.departing.at(index)) return departing_value(ctx, ctx.rank[index], angle, group_size);
  return staying_value(ctx, period, ctx.rank[index], angle, group_size);
}

ValueTable::ValueTable(int cameras, int groups, int regions, int horizon)
    : cameras_(cameras),
      groups_(groups),
      regions_(regions),
      horizon_(horizon),
      group_values_(static_cast<std::size_t>(cameras * groups * horizon), 0),
      group_present_(static_cast<std::size_t>(cameras * groups * horizon), 0),
      fixed_values_(static_cast<std::size_t>(cameras * regions * horizon), 0) {}

std::size_t ValueTable::group_slot(int camera, int group, int period) const {
  if (camera < 0 || camera >= cameras_ || group < 0 || group >= groups_ || period < 1 ||
      period > horizon_) {
    throw std::out_of_range("ValueTable: group index out of range");
  }
  return static_cast<std::size_t>((camera * groups_ + group) * horizon_ + (period - 1));
}

std::size_t ValueTable::fixed_slot(int camera, int region, int period) const {
  if (camera < 0 || camera >= cameras_ || region < 0 || region >= regions_ || period < 1 ||
      period > horizon_) {
    throw std::out_of_range("ValueTable: fixed index out of range");
  }
  return static_cast<std::size_t>((camera * regions_ + region) * horizon_ + (period - 1));
}

std::optional<Value> ValueTable::group(int camera, int group, int period) const {
  const std::size_t slot = group_slot(camera, group, period);
  if (!group_present_[slot]) return std::nullopt;
  return group_values_[slot];
}

Value ValueTable::fixed(int camera, int region, int period) const {
  return fixed_values_[fixed_slot(camera, region, period)];
}

void ValueTable::set_group(int camera, int group, int period, std::optional<Value> value) {
  const std::size_t slot = group_slot(camera, group, period);
  group_present_[slot] = value.has_value() ? 1 : 0;
  group_values_[slot] = value.value_or(0);
}

void ValueTable::set_fixed(int camera, int region, int period, Value value) {
  fixed_values_[fixed_slot(camera, region, period)] = value;
}

ValueTable build_value_table(const ValueInputs& in) {
  check_inputs(in);
  ValueTable table = empty_table(in);
  const int cameras = table.cameras();
  const int groups = table.groups();
  const int pairs = cameras * groups;
#pragma omp parallel for schedule(dynamic, 8) if (pairs > 64)
  for (int pair = 0; pair < pairs; ++pair) {
    fill_camera_group(in, table, pair / groups, pair % groups);
  }
  for (int c = 0; c < cameras; ++c) fill_camera_fixed(in, table, c);
  return table;
}

ValueTable build_value_table_serial(const ValueInputs& in) {
  check_inputs(in);
  ValueTable table = empty_table(in);
  for (int c = 0; c < table.cameras(); ++c) {
    for (int g = 0; g < table.groups(); ++g) fill_camera_group(in, table, c, g);
    fill_camera_fixed(in, table, c);
  }
  return table;
}

std::vector<int> count_in_regions(std::span<const FixedRegion> regions,
                                  std::span<const std::vector<Point2>> predictions,
                                  int horizon) {
  std::vector<int> counts(regions.size() * static_cast<std::size_t>(horizon), 0);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    for (const auto& path : predictions) {
      for (int t = 1; t <= horizon && t <= static_cast<int>(path.size()); ++t) {
        if (regions[r].bounds.contains(path[static_cast<std::size_t>(t - 1)])) {
          ++counts[r * static_cast<std::size_t>(horizon) + static_cast<std::size_t>(t - 1)];
        }
      }
    }
  }
  return counts;
}

}  // namespace ptzflow
