#include "ptzflow/planner.hpp"

#include <algorithm>
#include <unordered_map>

namespace ptzflow {

namespace {

std::vector<Point2> capture_positions(const Track& track, const Scene& scene,
                                      const PlannerConfig& cfg, double now) {
  return predict_positions(track, cfg.horizon, cfg.period_len,
                           now + capture_offset(scene) - cfg.period_len);
}

}  // namespace

std::vector<FixedRegion> vertical_bands(const Rect& field, int count) {
  std::vector<FixedRegion> regions;
  const double width = field.width() / count;
  for (int k = 0; k < count; ++k) {
    const double x0 = field.x0 + k * width;
    const double x1 = k + 1 == count ? field.x1 : x0 + width;
    regions.push_back({k, Rect{x0, field.y0, x1, field.y1}});
  }
  return regions;
}

double capture_offset(const Scene& scene) {
  if (scene.cameras.empty()) return 0.0;
  const CameraConfig& cam = scene.cameras.front();
  return cam.transition_time + cam.capture_time / 2.0;
}

std::vector<GroupNode> form_groups(std::span<const Track> tracks, const Scene& scene,
                                   const PlannerConfig& cfg, double now) {
  std::vector<const Track*> pending;
  for (const Track& track : tracks) {
    if (!track.interrogated) pending.push_back(&track);
  }
  std::sort(pending.begin(), pending.end(),
            [](const Track* a, const Track* b) { return a->id < b->id; });

  std::vector<int> ids;
  std::vector<Point2> first;
  std::unordered_map<int, std::vector<Point2>> paths;
  for (const Track* track : pending) {
    auto path = capture_positions(*track, scene, cfg, now);
    ids.push_back(track->id);
    first.push_back(path.front());
    paths.emplace(track->id, std::move(path));
  }

  std::vector<GroupNode> groups;
  if (cfg.grouped) {
    const auto candidates = candidate_coverages(ids, first, cfg.group_radius);
    groups = greedy_set_cover(candidates, ids);
  } else {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      GroupNode group;
      group.id = static_cast<int>(i);
      group.anchor_id = ids[i];
      group.member_ids = {ids[i]};
      group.focus = first[i];
      groups.push_back(std::move(group));
    }
  }

  std::unordered_map<int, const Track*> by_id;
  for (const Track* track : pending) by_id.emplace(track->id, track);
  for (GroupNode& group : groups) {
    group.focus_per_period = paths.at(group.anchor_id);
    Point2 velocity;
    for (int id : group.member_ids) velocity = velocity + by_id.at(id)->state.velocity();
    group.velocity = (1.0 / group.size()) * velocity;
    group.exit_time = group_exit_time(group, tracks);
  }
  return groups;
}

Plan make_plan(const Scene& scene, const PlannerConfig& cfg, double now,
               std::span<const Track> tracks, const PlanState& state) {
  Plan plan;
  plan.groups = form_groups(tracks, scene, cfg, now);
  plan.context = classify_and_rank(plan.groups, cfg.horizon, cfg.period_len, now);

  std::vector<std::vector<Point2>> predictions;
  predictions.reserve(tracks.size());
  for (const Track& track : tracks) predictions.push_back(capture_positions(track, scene, cfg, now));
  const std::vector<int> in_view = count_in_regions(scene.regions, predictions, cfg.horizon);

  ValueInputs inputs;
  inputs.cameras = scene.cameras;
  inputs.groups = plan.groups;
  inputs.regions = scene.regions;
  inputs.context = &plan.context;
  inputs.field = scene.field;
  inputs.tracks_in_view = in_view;
  plan.values = build_value_table(inputs);

  PlanState sized = state;
  sized.group_interrogated.resize(plan.groups.size(), false);
  plan.graph = build_graph(plan.values, cfg.horizon, cfg.window, sized, cfg.p_formula);
  plan.solution = solve(plan.graph);
  plan.schedule = extract_schedule(plan.graph, plan.solution);
  return plan;
}

}  // namespace ptzflow
