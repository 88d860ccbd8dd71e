#pragma once

#include <span>
#include <vector>

#include "ptzflow/geometry.hpp"
#include "ptzflow/tracking.hpp"

namespace ptzflow {

// Tracks visible when a camera centers on `center` (the position of track `center_id`).
struct CoverageCandidate {
  int center_id = 0;
  Point2 center;
  std::vector<int> covered_ids;  // ascending
};

// A cluster of tracks captured together by one zoomed look.
struct GroupNode {
  int id = 0;
  int anchor_id = 0;            // track whose predicted position is the focus
  std::vector<int> member_ids;  // ascending
  Point2 focus;
  std::vector<Point2> focus_per_period;
  Point2 velocity;
  double exit_time = kNever;

  int size() const { return static_cast<int>(member_ids.size()); }
};

// One candidate per entry of `ids`, covering every id whose position lies within
// `radius` of it. OpenMP over centers; candidate_coverages_serial is the reference.
std::vector<CoverageCandidate> candidate_coverages(std::span<const int> ids,
                                                   std::span<const Point2> positions,
                                                   double radius);
std::vector<CoverageCandidate> candidate_coverages_serial(std::span<const int> ids,
                                                          std::span<const Point2> positions,
                                                          double radius);

// Repeatedly takes the candidate covering the most uncovered ids (ties: lowest
// center id). Each id lands in the first group that covers it.
std::vector<GroupNode> greedy_set_cover(std::span<const CoverageCandidate> candidates,
                                        std::span<const int> universe);

// Earliest member exit time. Members missing from `tracks` are ignored.
double group_exit_time(const GroupNode& group, std::span<const Track> tracks);

}  // namespace ptzflow
