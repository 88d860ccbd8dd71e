#pragma once

#include <array>

#include "ptzflow/geometry.hpp"

namespace ptzflow {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr bool contains(double v, double eps = 1e-12) const {
    return v >= lo - eps && v <= hi + eps;
  }
};

// Pan is the ground azimuth of the optical axis, counter-clockwise from +x.
// Tilt is the elevation of the optical axis; -pi/2 looks straight down.
struct CameraConfig {
  int id = 0;
  Point2 position;
  double height = 50.0;
  double fov = kPi / 2.0;  // full horizontal angle at zoom 1
  double aspect = 1.0;
  Interval pan_range{-kPi, kPi};
  Interval tilt_range{-kPi / 2.0, 0.0};
  double max_zoom = 10.0;
  double transition_time = 1.0;
  double capture_time = 2.0;

  // Throws ConfigError when a field is out of its valid range.
  void validate() const;
};

struct PtzSetting {
  double pan = 0.0;
  double tilt = -kPi / 2.0;
  double zoom = 1.0;
};

// Ground-plane image of the view frustum, corners in winding order.
struct Footprint {
  std::array<Point2, 4> corners;

  double area() const;
  bool contains(Point2 p) const;
  bool contains_disc(Point2 center, double radius) const;
};

inline constexpr Point2 kNorth{0.0, 1.0};

// Throws HorizonError if any corner ray fails to hit the ground.
Footprint footprint(const CameraConfig& cam, const PtzSetting& setting);

// Centers the optical axis on `target` and picks the tightest zoom whose footprint
// still holds the disc of `required_radius` (zoom 1 if none does).
// Throws OutOfRangeError when the target is outside the pan/tilt range.
PtzSetting aim_at(const CameraConfig& cam, Point2 target, double required_radius);

// Unsigned angle in [0, pi] between the camera->target ground direction and reference_dir.
double sight_angle(const CameraConfig& cam, Point2 target, Point2 reference_dir);

// Angle for a moving target: zero when the target walks straight at the camera.
double track_sight_angle(const CameraConfig& cam, Point2 target, Point2 velocity);

// Video quality score of an observation angle.
int quality_value(double angle);

}  // namespace ptzflow

namespace ptzflow {

// True when aim_at would accept `target`.
bool reachable(const CameraConfig& cam, Point2 target);

}  // namespace ptzflow
