#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

#include "ptzflow/geometry.hpp"

namespace ptzflow {

// Exit-time sentinel for a target that never leaves the field.
inline constexpr double kNever = std::numeric_limits<double>::infinity();

// Constant-velocity state: position (ft) and velocity (ft/s).
struct TrackState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;

  Point2 position() const { return {x, y}; }
  Point2 velocity() const { return {vx, vy}; }
  bool finite() const;
};

using Covariance = Eigen::Matrix4d;

// Bounding-box detection. Only the center drives the filter; h and w ride along.
struct Observation {
  double xc = 0.0;
  double yc = 0.0;
  double h = 5.8;
  double w = 1.8;
};

// Diagonal noise intensities. Process noise is added as Q * dt on predict.
struct NoiseModel {
  double process = 0.01;
  double measurement = 0.25;
};

struct Track {
  int id = 0;
  TrackState state;
  Covariance covariance = Covariance::Identity();
  double exit_time = kNever;
  bool interrogated = false;
  double birth_time = 0.0;
  double stamp = 0.0;  // time the state refers to
};

inline constexpr double kInitialVariance = 10.0;

// New track at the first observation: zero velocity, inflated covariance.
Track make_track(int id, const Observation& obs, double time,
                 double initial_variance = kInitialVariance);

Track kf_predict(Track track, double dt, const NoiseModel& noise);
Track kf_update(Track track, const Observation& obs, const NoiseModel& noise);

// Earliest time the straight-line path from `state` (valid at `now`) leaves `bounds`.
double predict_exit_time(const TrackState& state, const Rect& bounds, double now);

// Noiseless positions at from + k * period_len, k = 1..periods.
std::vector<Point2> predict_positions(const Track& track, int periods, double period_len,
                                      double from);
std::vector<Point2> predict_positions(const Track& track, int periods, double period_len);

}  // namespace ptzflow
