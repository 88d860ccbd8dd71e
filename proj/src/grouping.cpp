#include "ptzflow/grouping.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace ptzflow {

namespace {

CoverageCandidate cover_from(std::size_t center, std::span<const int> ids,
                             std::span<const Point2> positions, double radius) {
  CoverageCandidate candidate;
  candidate.center_id = ids[center];
  candidate.center = positions[center];
  for (std::size_t j = 0; j < ids.size(); ++j) {
    if (distance(positions[center], positions[j]) <= radius) {
      candidate.covered_ids.push_back(ids[j]);
    }
  }
  std::sort(candidate.covered_ids.begin(), candidate.covered_ids.end());
  return candidate;
}

void check_sizes(std::span<const int> ids, std::span<const Point2> positions) {
  if (ids.size() != positions.size()) {
    throw std::invalid_argument("candidate_coverages: ids and positions differ in length");
  }
}

}  // namespace

std::vector<CoverageCandidate> candidate_coverages(std::span<const int> ids,
                                                   std::span<const Point2> positions,
                                                   double radius) {
  check_sizes(ids, positions);
  const auto n = static_cast<std::ptrdiff_t>(ids.size());
  std::vector<CoverageCandidate> out(ids.size());
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        cover_from(static_cast<std::size_t>(i), ids, positions, radius);
  }
  return out;
}

std::vector<CoverageCandidate> candidate_coverages_serial(std::span<const int> ids,
                                                          std::span<const Point2> positions,
                                                          double radius) {
  check_sizes(ids, positions);
  std::vector<CoverageCandidate> out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.push_back(cover_from(i, ids, positions, radius));
  }
  return out;
}

std::vector<GroupNode> greedy_set_cover(std::span<const CoverageCandidate> candidates,
                                        std::span<const int> universe) {
  std::unordered_map<int, bool> covered;
  for (int id : universe) covered.emplace(id, false);
  std::size_t remaining = covered.size();

  std::vector<bool> used(candidates.size(), false);
  std::vector<GroupNode> groups;
  while (remaining > 0) {
    std::size_t best = candidates.size();
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      std::size_t gain = 0;
      for (int id : candidates[c].covered_ids) {
        auto it = covered.find(id);
        if (it != covered.end() && !it->second) ++gain;
      }
      if (gain == 0) continue;
      if (gain > best_gain ||
          (gain == best_gain && candidates[c].center_id < candidates[best].center_id)) {
        best = c;
        best_gain = gain;
      }
    }
    if (best == candidates.size()) {
      throw std::invalid_argument("greedy_set_cover: candidates do not cover the universe");
    }
    used[best] = true;

    GroupNode group;
    group.id = static_cast<int>(groups.size());
    group.anchor_id = candidates[best].center_id;
    group.focus = candidates[best].center;
    for (int id : candidates[best].covered_ids) {
      auto it = covered.find(id);
      if (it != covered.end() && !it->second) {
        it->second = true;
        group.member_ids.push_back(id);
      }
    }
    remaining -= group.member_ids.size();
    groups.push_back(std::move(group));
  }
  return groups;
}

double group_exit_time(const GroupNode& group, std::span<const Track> tracks) {
  double earliest = kNever;
  for (const Track& track : tracks) {
    if (std::binary_search(group.member_ids.begin(), group.member_ids.end(), track.id)) {
      earliest = std::min(earliest, track.exit_time);
    }
  }
  return earliest;
}

}  // namespace ptzflow
