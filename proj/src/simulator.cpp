#include "ptzflow/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include <spdlog/spdlog.h>

#include "ptzflow/errors.hpp"

namespace ptzflow {

namespace {

constexpr std::uint64_t kArrivalStream = 0xA11;
constexpr std::uint64_t kSensorStream = 0x5E5;
constexpr std::uint64_t kWalkStream = 0x3A1C;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t extra = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(extra)};
  return std::mt19937_64(seq);
}

void log_event(std::string& trace, double t, const char* fmt, auto... args) {
  char head[48];
  std::snprintf(head, sizeof head, "t=%.3f ", t);
  char body[256];
  std::snprintf(body, sizeof body, fmt, args...);
  trace += head;
  trace += body;
  trace += '\n';
}

bool sees(const CameraTask& task, Point2 p) {
  switch (task.kind) {
    case CameraTask::Kind::FixedLook:
    case CameraTask::Kind::WideStatic:
      return task.area.contains(p);
    case CameraTask::Kind::Zoom:
      return task.view.has_value() && task.view->contains(p);
    case CameraTask::Kind::Idle:
      break;
  }
  return false;
}

void observe(WorldState& state, const ScenarioConfig& cfg, const Pedestrian& ped,
             const Observation& obs) {
  auto it = state.tracks.find(ped.id);
  if (it == state.tracks.end()) {
    Track track = make_track(ped.id, obs, state.clock);
    track.exit_time = predict_exit_time(track.state, cfg.field, state.clock);
    track.interrogated = state.interrogated.count(ped.id) > 0;
    state.tracks.emplace(ped.id, track);
    state.first_detection.emplace(ped.id, state.clock);
    return;
  }
  Track& track = it->second;
  const double dt = state.clock - track.stamp;
  if (dt > 1e-12) track = kf_predict(track, dt, cfg.filter);
  track = kf_update(track, obs, cfg.filter);
  track.exit_time = predict_exit_time(track.state, cfg.field, state.clock);
}

// Shared frame loop; the planner decides camera tasks at each period start.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg),
        scene_(cfg.scene()),
        arrivals_(stream(cfg.seed, kArrivalStream)),
        sensors_(stream(cfg.seed, kSensorStream)),
        frames_per_period_(std::lround(cfg.planner.period_len * cfg.frames_per_second)),
        transition_frames_(std::lround(cfg.cameras.front().transition_time * cfg.frames_per_second)),
        capture_frames_(std::lround(cfg.cameras.front().capture_time * cfg.frames_per_second)) {
    state_.tasks.resize(cfg.cameras.size());
    satisfied_.assign(static_cast<std::size_t>(cfg.region_count()), false);
  }

  template <typename Assign>
  RunResult run(std::string_view method, Assign assign) {
    const auto started = std::chrono::steady_clock::now();
    const std::string hash = config_hash(cfg_);
    char header[160];
    std::snprintf(header, sizeof header, "# method=%.*s seed=%llu config=%s\n",
                  static_cast<int>(method.size()), method.data(),
                  static_cast<unsigned long long>(cfg_.seed), hash.c_str());
    state_.trace += header;

    const double dt = 1.0 / cfg_.frames_per_second;
    const long max_frames = std::lround(cfg_.max_time * cfg_.frames_per_second);
    long frame = 0;
    long period_start = 0;
    int period = 0;
    for (;;) {
      if (frame % frames_per_period_ == 0) {
        if (frame > 0) {
          finish_period();
          ++period;
        }
        const bool drained = state_.spawned == cfg_.total_pedestrians && state_.live.empty();
        if (drained && period >= cfg_.planner.window && period % cfg_.planner.window == 0) break;
        if (frame >= max_frames) {
          spdlog::warn("simulation stopped at max_time {} s with {} pedestrians inside",
                       cfg_.max_time, state_.live.size());
          break;
        }
        period_start = frame;
        const int phase = period % cfg_.planner.window;
        if (phase == 0) std::fill(satisfied_.begin(), satisfied_.end(), false);
        for (CameraTask& task : state_.tasks) task = CameraTask{};
        assign(state_, period, phase, satisfied_);
      }

      spawn(frame);
      const long offset = frame + 1 - period_start;
      for (CameraTask& task : state_.tasks) {
        task.sensing = task.kind == CameraTask::Kind::WideStatic ||
                       (offset > transition_frames_ && offset <= frames_per_period_);
      }
      state_.clock = static_cast<double>(frame) * dt;
      step_world(state_, cfg_, dt, sensors_);
      ++frame;
      state_.clock = static_cast<double>(frame) * dt;
      if (frame - period_start == transition_frames_ + capture_frames_ / 2) mid_capture();
    }

    RunResult result;
    result.trace = std::move(state_.trace);
    result.report = compute_metrics(result.trace);
    result.report.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
  }

  const Scene& scene() const { return scene_; }
  const ScenarioConfig& config() const { return cfg_; }

 private:
  void spawn(long frame) {
    if (state_.spawned >= cfg_.total_pedestrians) return;
    for (Pedestrian& ped : spawn_pedestrians(cfg_, arrivals_, frame, state_.spawned)) {
      log_event(state_.trace, ped.entry_time, "event=spawn id=%d x=%.3f y=%.3f vx=%.3f vy=%.3f",
                ped.id, ped.truth.x, ped.truth.y, ped.truth.vx, ped.truth.vy);
      ++state_.spawned;
      state_.live.push_back(std::move(ped));
    }
  }

  void mid_capture() {
    for (CameraTask& task : state_.tasks) {
      if (task.kind != CameraTask::Kind::Zoom || !task.view) continue;
      for (const Pedestrian& ped : state_.live) {
        const bool planned = std::binary_search(task.planned.begin(), task.planned.end(), ped.id);
        if (planned && task.view->contains(ped.truth.position())) task.captured.insert(ped.id);
      }
    }
  }

  void finish_period() {
    for (std::size_t cam = 0; cam < state_.tasks.size(); ++cam) {
      const CameraTask& task = state_.tasks[cam];
      if (task.kind == CameraTask::Kind::FixedLook) {
        log_event(state_.trace, state_.clock, "event=fixed_look camera=%zu region=%d seen=%zu",
                  cam, task.target, task.seen.size());
        satisfied_[static_cast<std::size_t>(task.target)] = true;
      } else if (task.kind == CameraTask::Kind::Zoom) {
        if (task.captured.size() < task.planned.size()) {
          spdlog::debug("t={:.3f} camera {} captured {} of {} planned (view {})", state_.clock, cam,
                        task.captured.size(), task.planned.size(), task.view ? "ok" : "failed");
        }
        for (int id : task.captured) {
          if (!state_.interrogated.insert(id).second) continue;
          log_event(state_.trace, state_.clock, "event=capture camera=%zu target=%d detected=%.3f",
                    cam, id, state_.first_detection.at(id));
          if (auto it = state_.tracks.find(id); it != state_.tracks.end()) {
            it->second.interrogated = true;
          }
        }
      }
    }
  }

  ScenarioConfig cfg_;
  Scene scene_;
  WorldState state_;
  std::mt19937_64 arrivals_;
  std::mt19937_64 sensors_;
  long frames_per_period_;
  long transition_frames_;
  long capture_frames_;
  std::vector<bool> satisfied_;
};

CameraTask zoom_task(const CameraConfig& cam, Point2 focus, double radius, int target) {
  CameraTask task;
  task.kind = CameraTask::Kind::Zoom;
  task.target = target;
  try {
    task.view = footprint(cam, aim_at(cam, focus, radius));
  } catch (const HorizonError&) {
    task.view.reset();
  } catch (const OutOfRangeError&) {
    task.view.reset();
  }
  return task;
}

void drop_departed(WorldState& state) {
  std::erase_if(state.tracks, [&](const auto& entry) { return entry.second.exit_time <= state.clock; });
}

std::vector<Track> track_list(const WorldState& state) {
  std::vector<Track> tracks;
  tracks.reserve(state.tracks.size());
  for (const auto& [id, track] : state.tracks) tracks.push_back(track);
  return tracks;
}

}  // namespace

std::vector<Pedestrian> spawn_pedestrians(const ScenarioConfig& cfg, std::mt19937_64& rng,
                                          long frame, int already_spawned) {
  std::vector<Pedestrian> out;
  if (cfg.arrival_rate <= 0.0 || already_spawned >= cfg.total_pedestrians) return out;
  std::poisson_distribution<int> arrivals(cfg.arrival_rate);
  std::uniform_real_distribution<double> entry(cfg.field.x0, cfg.field.x1);
  std::uniform_real_distribution<double> speed(cfg.speed_min, cfg.speed_max);
  std::uniform_real_distribution<double> jitter(-cfg.heading_jitter, cfg.heading_jitter);

  const int count = std::min(arrivals(rng), cfg.total_pedestrians - already_spawned);
  for (int k = 0; k < count; ++k) {
    Pedestrian ped;
    ped.id = already_spawned + k;
    const double x = entry(rng);
    const double v = speed(rng);
    const double heading = -kPi / 2.0 + jitter(rng);
    ped.truth = {x, cfg.field.y1, v * std::cos(heading), v * std::sin(heading)};
    ped.entry_time = static_cast<double>(frame) / cfg.frames_per_second;
    ped.rng = stream(cfg.seed, kWalkStream, static_cast<std::uint64_t>(ped.id));
    out.push_back(std::move(ped));
  }
  return out;
}

Observation detect(const Pedestrian& ped, const ScenarioConfig& cfg, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, std::sqrt(cfg.detection_noise));
  Observation obs;
  obs.xc = ped.truth.x + noise(rng);
  obs.yc = ped.truth.y + noise(rng);
  return obs;
}

void step_world(WorldState& state, const ScenarioConfig& cfg, double dt,
                std::mt19937_64& sensor_rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_world: dt must be positive");
  state.clock += dt;
  const double walk_sd = std::sqrt(cfg.walk_noise * dt);
  for (Pedestrian& ped : state.live) {
    ped.truth.x += ped.truth.vx * dt;
    ped.truth.y += ped.truth.vy * dt;
    if (walk_sd > 0.0) {
      std::normal_distribution<double> walk(0.0, walk_sd);
      ped.truth.vx += walk(ped.rng);
      ped.truth.vy += walk(ped.rng);
    }
  }
  std::erase_if(state.live, [&](const Pedestrian& ped) {
    if (cfg.field.contains(ped.truth.position())) return false;
    log_event(state.trace, state.clock, "event=exit id=%d", ped.id);
    ++state.exited;
    return true;
  });

  for (CameraTask& task : state.tasks) {
    if (!task.sensing) continue;
    for (const Pedestrian& ped : state.live) {
      if (!sees(task, ped.truth.position())) continue;
      observe(state, cfg, ped, detect(ped, cfg, sensor_rng));
      task.seen.insert(ped.id);
    }
  }
}

std::string config_hash(const ScenarioConfig& cfg) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(cfg.canonical())));
  return buf;
}

RunResult run_flexible(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.kind == PlannerKind::MasterSlave) {
    throw ConfigError("run_flexible: configured planner is master_slave");
  }
  const Scene scene = cfg.scene();
  if (auto problem = feasibility_check(cfg.planner.horizon, cfg.planner.window,
                                       static_cast<int>(scene.cameras.size()),
                                       static_cast<int>(scene.regions.size()), 0)) {
    throw ConfigError("infeasible configuration: " + *problem);
  }
  PlannerConfig planner = cfg.planner;
  planner.grouped = cfg.kind == PlannerKind::FlexibleGrouped;

  Simulation sim(cfg);
  return sim.run(to_string(cfg.kind), [&](WorldState& state, int period, int phase,
                                          const std::vector<bool>& satisfied) {
    drop_departed(state);
    const std::vector<Track> tracks = track_list(state);
    if (spdlog::should_log(spdlog::level::debug)) {
      for (const Track& track : tracks) {
        spdlog::debug("t={:.1f} track {} pos=({:.1f},{:.1f}) vel=({:.2f},{:.2f}) exit={:.1f} done={}",
                      state.clock, track.id, track.state.x, track.state.y, track.state.vx,
                      track.state.vy, track.exit_time, track.interrogated);
      }
    }
    PlanState plan_state;
    plan_state.window_phase = phase;
    plan_state.region_satisfied = satisfied;
    const Plan plan = make_plan(scene, planner, state.clock, tracks, plan_state);
    log_event(state.trace, state.clock,
              "event=plan period=%d tracks=%zu groups=%zu nodes=%zu arcs=%zu objective=%lld",
              period, tracks.size(), plan.groups.size(), plan.graph.nodes.size(),
              plan.graph.arcs.size(), static_cast<long long>(plan.solution.objective));

    for (std::size_t cam = 0; cam < scene.cameras.size(); ++cam) {
      const Action& action = plan.schedule.at(static_cast<int>(cam), 1);
      CameraTask& task = state.tasks[cam];
      if (action.kind == Action::Kind::ObserveGroup) {
        const GroupNode& group = plan.groups[static_cast<std::size_t>(action.target)];
        task = zoom_task(scene.cameras[cam], group.focus_per_period.front(),
                         planner.group_radius, action.target);
        task.planned = group.member_ids;
      } else if (action.kind == Action::Kind::ObserveFixed) {
        task.kind = CameraTask::Kind::FixedLook;
        task.target = action.target;
        task.area = scene.regions[static_cast<std::size_t>(action.target)].bounds;
      }
    }
  });
}

RunResult run_master_slave(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.cameras.size() < 2) throw ConfigError("master_slave needs at least two cameras");
  const Scene scene = cfg.scene();
  const double offset = capture_offset(scene);

  Simulation sim(cfg);
  return sim.run("master_slave", [&](WorldState& state, int, int,
                                     const std::vector<bool>&) {
    drop_departed(state);
    CameraTask& wide = state.tasks.front();
    wide.kind = CameraTask::Kind::WideStatic;
    wide.area = scene.field;

    struct Candidate {
      const Track* track;
      Point2 aim;
    };
    std::vector<Candidate> queue;
    for (const auto& [id, track] : state.tracks) {
      if (track.interrogated) continue;
      const Point2 aim =
          predict_positions(track, 1, offset, state.clock).front();
      if (scene.field.contains(aim)) queue.push_back({&track, aim});
    }
    auto key = [&](const Candidate& c) {
      return cfg.baseline == BaselinePolicy::EarliestDeadline ? c.track->exit_time
                                                              : c.track->birth_time;
    };
    std::stable_sort(queue.begin(), queue.end(), [&](const Candidate& a, const Candidate& b) {
      if (key(a) != key(b)) return key(a) < key(b);
      return a.track->id < b.track->id;
    });

    std::size_t next = 0;
    for (std::size_t cam = 1; cam < scene.cameras.size() && next < queue.size(); ++cam, ++next) {
      state.tasks[cam] = zoom_task(scene.cameras[cam], queue[next].aim,
                                   cfg.planner.group_radius, queue[next].track->id);
      state.tasks[cam].planned = {queue[next].track->id};
    }
  });
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  if (cfg.kind == PlannerKind::MasterSlave) return run_master_slave(cfg);
  return run_flexible(cfg);
}

}  // namespace ptzflow
