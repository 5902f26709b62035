#include "shiplab/env.hpp"

#include <cmath>
#include <stdexcept>

#include "shiplab/hydrodynamics.hpp"

namespace shiplab {

void EpisodeConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("EpisodeConfig: ") + what);
  };
  require(dest_min > 0.0 && dest_min < dest_max,
          "destination range must satisfy 0 < min < max");
  require(max_steps > 0, "max_steps must be > 0");
  require(control_interval > 0.0, "control_interval must be > 0");
  require(substep > 0.0 && substep <= control_interval,
          "substep must be in (0, control_interval]");
  require(success_radius > 0.0, "success_radius must be > 0");
}

double step_reward(const Observation& obs) {
  const double r1 = 2.0 * std::exp(-obs.d_c * obs.d_c / 12.5) - 1.0;
  const double r2 = 1.3 * std::exp(-10.0 * std::abs(obs.chi_e)) - 0.3;
  const double r3 = -obs.d_wp / 4.0;
  return r1 + r2 + r3;
}

WaypointEnv::WaypointEnv(ShipModel ship, EpisodeConfig cfg)
    : ship_(std::move(ship)), cfg_(cfg) {
  ship_.validate();
  cfg_.validate();
  n_prop_ = self_propulsion_rate(ship_);
  reset_to({cfg_.dest_min, 0.0});
}

void WaypointEnv::set_wind(const WindField& wind, bool enabled) {
  wind_ = wind;
  wind_enabled_ = enabled;
}

void WaypointEnv::reset_vessel() {
  state_ = VesselState{};
  state_.u = 1.0;
  steps_ = 0;
  outcome_ = Outcome::running;
}

Observation WaypointEnv::reset(RngStream& rng) {
  const double dist = rng.uniform(cfg_.dest_min, cfg_.dest_max);
  const double angle = rng.uniform(0.0, 2.0 * M_PI);
  return reset_to({dist * std::cos(angle), dist * std::sin(angle)});
}

Observation WaypointEnv::reset_to(const Eigen::Vector2d& destination) {
  WaypointPath path;
  path.waypoints = {destination};
  path.start = Eigen::Vector2d::Zero();
  path.acceptance_radius = cfg_.success_radius;
  VesselState init;
  init.u = 1.0;
  return reset_path(path, init);
}

Observation WaypointEnv::reset_path(const WaypointPath& path,
                                    const VesselState& init) {
  if (!path.valid() || path.finished)
    throw std::invalid_argument("WaypointEnv: invalid or finished path");
  reset_vessel();
  state_ = init;
  path_ = path;
  single_waypoint_ = path_.waypoints.size() == 1;
  spawn_distance_ =
      (path_.waypoints[path_.active_index] - Eigen::Vector2d(init.x, init.y))
          .norm();
  if (spawn_distance_ <= 0.0)
    throw std::invalid_argument("WaypointEnv: spawn on top of the waypoint");
  return observe();
}

Observation WaypointEnv::observe() const {
  const PathSegment seg = active_segment(path_);
  const Eigen::Vector2d pos(state_.x, state_.y);
  const Eigen::Vector2d target = path_.waypoints[path_.active_index];
  Observation obs;
  obs.d_c = cross_track_error(pos, seg);
  const double bearing =
      std::atan2(target.y() - pos.y(), target.x() - pos.x());
  obs.chi_e = course_error(state_, bearing);
  obs.d_wp = (target - pos).norm();
  obs.r = state_.r;
  return obs;
}

bool WaypointEnv::missed_destination() const {
  if (!single_waypoint_) return false;
  const PathSegment seg = active_segment(path_);
  const Eigen::Vector2d pos(state_.x, state_.y);
  const Eigen::Vector2d tangent = (seg.b - seg.a).normalized();
  const double along = tangent.dot(pos - seg.a);
  if (along <= seg.length()) return false;
  const Eigen::Vector3d vel = kinematics(state_);
  const Eigen::Vector2d to_dest = seg.b - pos;
  return vel.head<2>().dot(to_dest) < 0.0;
}

StepResult WaypointEnv::step(double delta_c) {
  if (done()) throw std::logic_error("WaypointEnv::step: episode is done");

  const ControlInput ctrl{clamp_rudder(delta_c), n_prop_};
  double remaining = cfg_.control_interval;
  while (remaining > 1e-12) {
    const double h = std::min(cfg_.substep, remaining);
    BodyLoads external;
    if (wind_enabled_ && wind_.speed > 0.0)
      external = wind_loads(relative_wind(state_, wind_), ship_.wind);
    state_ = rk4_step(ship_, state_, ctrl, external, h);
    remaining -= h;
  }
  ++steps_;

  const AdvanceResult advance =
      waypoint_advance(path_, {state_.x, state_.y});

  if (advance.finished)
    outcome_ = Outcome::success;
  else if (steps_ >= cfg_.max_steps)
    outcome_ = Outcome::timeout;
  else if (missed_destination())
    outcome_ = Outcome::missed;

  StepResult result;
  result.observation = observe();
  result.reward = step_reward(result.observation);
  if (cfg_.normalize_r3)
    result.reward +=
        result.observation.d_wp / 4.0 * (1.0 - 1.0 / spawn_distance_);
  // Reward terms are bounded by construction whenever the distance term is
  // within the training envelope; a violation means the model or geometry
  // broke down.
  if (result.observation.d_wp <= 28.0 && !cfg_.normalize_r3 &&
      !(result.reward > -8.3 && result.reward <= 2.3))
    throw std::logic_error("WaypointEnv: reward outside (-8.3, 2.3]");
  if (outcome_ == Outcome::success) result.reward += cfg_.terminal_bonus;
  result.outcome = outcome_;
  result.done = done();
  return result;
}

}  // namespace shiplab
