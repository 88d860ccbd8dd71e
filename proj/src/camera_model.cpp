#include "ptzflow/camera_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptzflow/errors.hpp"

namespace ptzflow {

namespace {

struct Vec3 {
  double x, y, z;
};

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
Vec3 cross3(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double signed_area(const std::array<Point2, 4>& c) {
  double twice = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) twice += cross(c[i], c[(i + 1) % c.size()]);
  return twice / 2.0;
}

constexpr double kZoomStep = 0.05;

}  // namespace

void CameraConfig::validate() const {
  const std::string who = "camera " + std::to_string(id) + ": ";
  if (!(height > 0.0)) throw ConfigError(who + "height must be positive");
  if (!(fov > 0.0 && fov < kPi)) throw ConfigError(who + "fov must lie in (0, pi)");
  if (!(aspect > 0.0)) throw ConfigError(who + "aspect must be positive");
  if (!(max_zoom >= 1.0)) throw ConfigError(who + "max_zoom must be >= 1");
  if (pan_range.lo > pan_range.hi || tilt_range.lo > tilt_range.hi) {
    throw ConfigError(who + "empty pan or tilt range");
  }
  if (transition_time < 0.0 || !(capture_time > 0.0)) {
    throw ConfigError(who + "bad task timing");
  }
}

double Footprint::area() const { return std::abs(signed_area(corners)); }

bool Footprint::contains(Point2 p) const { return contains_disc(p, 0.0); }

bool Footprint::contains_disc(Point2 center, double radius) const {
  const double orientation = signed_area(corners) >= 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Point2 a = corners[i];
    const Point2 edge = corners[(i + 1) % corners.size()] - a;
    // Signed distance of the center to the edge line, positive inside.
    const double inside = orientation * cross(edge, center - a) / norm(edge);
    if (inside < radius - 1e-9) return false;
  }
  return true;
}

Footprint footprint(const CameraConfig& cam, const PtzSetting& setting) {
  const double cp = std::cos(setting.pan);
  const double sp = std::sin(setting.pan);
  const double ct = std::cos(setting.tilt);
  const double st = std::sin(setting.tilt);

  const Vec3 forward{ct * cp, ct * sp, st};
  const Vec3 right{sp, -cp, 0.0};
  const Vec3 up = cross3(right, forward);

  const double tan_h = std::tan(cam.fov / (2.0 * setting.zoom));
  const double tan_v = tan_h / cam.aspect;

  constexpr std::array<std::array<double, 2>, 4> signs{{{1, 1}, {1, -1}, {-1, -1}, {-1, 1}}};
  Footprint fp;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    const Vec3 ray = forward + (signs[i][0] * tan_h) * right + (signs[i][1] * tan_v) * up;
    if (ray.z >= -1e-9) {
      throw HorizonError("footprint: view ray at or above the horizon");
    }
    const double reach = cam.height / -ray.z;
    fp.corners[i] = cam.position + Point2{reach * ray.x, reach * ray.y};
  }
  return fp;
}

PtzSetting aim_at(const CameraConfig& cam, Point2 target, double required_radius) {
  const Point2 offset = target - cam.position;
  const double ground = norm(offset);

  PtzSetting setting;
  setting.pan = ground > 0.0 ? std::atan2(offset.y, offset.x)
                             : std::clamp(0.0, cam.pan_range.lo, cam.pan_range.hi);
  setting.tilt = -std::atan2(cam.height, ground);
  if (!cam.pan_range.contains(setting.pan) || !cam.tilt_range.contains(setting.tilt)) {
    throw OutOfRangeError("aim_at: target outside camera " + std::to_string(cam.id) +
                          " pan/tilt range");
  }

  auto fits = [&](double zoom) {
    PtzSetting trial = setting;
    trial.zoom = zoom;
    try {
      return footprint(cam, trial).contains_disc(target, required_radius);
    } catch (const HorizonError&) {
      return false;
    }
  };

  if (fits(cam.max_zoom)) {
    setting.zoom = cam.max_zoom;
    return setting;
  }
  // Containment only improves as zoom drops; walk down, then refine by bisection.
  for (double zoom = cam.max_zoom - kZoomStep; zoom > 1.0; zoom -= kZoomStep) {
    if (fits(zoom)) {
      double lo = zoom;
      double hi = std::min(zoom + kZoomStep, cam.max_zoom);
      for (int iter = 0; iter < 40; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (fits(mid) ? lo : hi) = mid;
      }
      setting.zoom = lo;
      return setting;
    }
  }
  setting.zoom = 1.0;
  return setting;
}

double sight_angle(const CameraConfig& cam, Point2 target, Point2 reference_dir) {
  const Point2 line_of_sight = target - cam.position;
  const double denom = norm(line_of_sight) * norm(reference_dir);
  if (denom == 0.0) return 0.0;
  return std::acos(std::clamp(dot(line_of_sight, reference_dir) / denom, -1.0, 1.0));
}

double track_sight_angle(const CameraConfig& cam, Point2 target, Point2 velocity) {
  if (norm(velocity) == 0.0) return sight_angle(cam, target, kNorth);
  return sight_angle(cam, target, -1.0 * velocity);
}

int quality_value(double angle) {
  const double e = std::abs(angle);
  if (e <= kPi / 6.0) return 3;
  if (e <= kPi / 3.0) return 2;
  if (e <= kPi / 2.0) return 1;
  return 0;
}

}  // namespace ptzflow

namespace ptzflow {

bool reachable(const CameraConfig& cam, Point2 target) {
  const Point2 offset = target - cam.position;
  const double ground = norm(offset);
  const double pan = ground > 0.0 ? std::atan2(offset.y, offset.x)
                                  : std::clamp(0.0, cam.pan_range.lo, cam.pan_range.hi);
  const double tilt = -std::atan2(cam.height, ground);
  return cam.pan_range.contains(pan) && cam.tilt_range.contains(tilt);
}

}  // namespace ptzflow
