#include "ptzflow/tracking.hpp"

#include <cmath>
#include <stdexcept>

#include "ptzflow/errors.hpp"

namespace ptzflow {

namespace {

Eigen::Vector4d to_vector(const TrackState& s) { return {s.x, s.y, s.vx, s.vy}; }

TrackState from_vector(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }

Covariance symmetrized(const Covariance& p) { return 0.5 * (p + p.transpose()); }

}  // namespace

bool TrackState::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(vx) && std::isfinite(vy);
}

Track make_track(int id, const Observation& obs, double time, double initial_variance) {
  Track track;
  track.id = id;
  track.state = {obs.xc, obs.yc, 0.0, 0.0};
  track.covariance = Covariance::Identity() * initial_variance;
  track.birth_time = time;
  track.stamp = time;
  return track;
}

Track kf_predict(Track track, double dt, const NoiseModel& noise) {
  if (!(dt > 0.0)) throw std::invalid_argument("kf_predict: dt must be positive");
  if (!track.state.finite()) throw std::invalid_argument("kf_predict: non-finite state");

  Eigen::Matrix4d transition = Eigen::Matrix4d::Identity();
  transition(0, 2) = dt;
  transition(1, 3) = dt;

  track.state = from_vector(transition * to_vector(track.state));
  track.covariance = symmetrized(transition * track.covariance * transition.transpose() +
                                 Covariance::Identity() * (noise.process * dt));
  track.stamp += dt;
  return track;
}

Track kf_update(Track track, const Observation& obs, const NoiseModel& noise) {
  if (!std::isfinite(obs.xc) || !std::isfinite(obs.yc)) {
    throw std::invalid_argument("kf_update: non-finite observation");
  }
  Eigen::Matrix<double, 2, 4> measure = Eigen::Matrix<double, 2, 4>::Zero();
  measure(0, 0) = 1.0;
  measure(1, 1) = 1.0;
  const Eigen::Matrix2d meas_noise = Eigen::Matrix2d::Identity() * noise.measurement;

  const Eigen::Matrix2d innovation_cov =
      measure * track.covariance * measure.transpose() + meas_noise;
  Eigen::FullPivLU<Eigen::Matrix2d> lu(innovation_cov);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw DegenerateNoiseError("kf_update: singular innovation covariance");
  }
  const Eigen::Matrix<double, 4, 2> gain =
      track.covariance * measure.transpose() * lu.inverse();

  const Eigen::Vector2d innovation =
      Eigen::Vector2d(obs.xc, obs.yc) - measure * to_vector(track.state);
  track.state = from_vector(to_vector(track.state) + gain * innovation);

  // Joseph form keeps the posterior symmetric PSD.
  const Eigen::Matrix4d i_kh = Eigen::Matrix4d::Identity() - gain * measure;
  track.covariance = symmetrized(i_kh * track.covariance * i_kh.transpose() +
                                 gain * meas_noise * gain.transpose());
  return track;
}

double predict_exit_time(const TrackState& state, const Rect& bounds, double now) {
  if (!bounds.contains(state.position())) return now;
  double best = kNever;
  auto consider = [&](double pos, double vel, double lo, double hi) {
    if (vel > 0.0) best = std::min(best, (hi - pos) / vel);
    if (vel < 0.0) best = std::min(best, (lo - pos) / vel);
  };
  consider(state.x, state.vx, bounds.x0, bounds.x1);
  consider(state.y, state.vy, bounds.y0, bounds.y1);
  return now + best;
}

std::vector<Point2> predict_positions(const Track& track, int periods, double period_len,
                                      double from) {
  if (periods < 1) throw std::invalid_argument("predict_positions: periods must be >= 1");
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(periods));
  for (int k = 1; k <= periods; ++k) {
    const double elapsed = from + k * period_len - track.stamp;
    out.push_back(track.state.position() + elapsed * track.state.velocity());
  }
  return out;
}

std::vector<Point2> predict_positions(const Track& track, int periods, double period_len) {
  return predict_positions(track, periods, period_len, track.stamp);
}

}  // namespace ptzflow
