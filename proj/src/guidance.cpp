#include "shiplab/guidance.hpp"

#include <cmath>
#include <stdexcept>

namespace shiplab {

bool WaypointPath::valid() const {
  if (waypoints.empty()) return false;
  if (active_index >= waypoints.size()) return false;
  Eigen::Vector2d prev = start;
  for (const auto& w : waypoints) {
    if ((w - prev).norm() == 0.0) return false;
    prev = w;
  }
  return true;
}

PathSegment active_segment(const WaypointPath& path) {
  if (path.waypoints.empty() || path.active_index >= path.waypoints.size())
    throw std::invalid_argument("active_segment: invalid path");
  PathSegment seg;
  seg.a = path.active_index == 0 ? path.start
                                 : path.waypoints[path.active_index - 1];
  seg.b = path.waypoints[path.active_index];
  return seg;
}

double path_tangent_angle(const PathSegment& seg) {
  const Eigen::Vector2d d = seg.b - seg.a;
  return std::atan2(d.y(), d.x());
}

double cross_track_error(const Eigen::Vector2d& pos, const PathSegment& seg) {
  const double len = seg.length();
  if (len == 0.0)
    throw std::invalid_argument("cross_track_error: degenerate segment");
  const Eigen::Vector2d t = (seg.b - seg.a) / len;
  const Eigen::Vector2d d = pos - seg.a;
  // 2D cross product t x d: positive when pos lies to starboard (right of
  // the path direction in the x-north / y-east frame).
  return t.x() * d.y() - t.y() * d.x();
}

double course_angle(const VesselState& state) {
  if (state.u == 0.0 && state.v == 0.0)
    throw std::domain_error("course_angle: undefined at zero speed");
  return state.psi + drift_angle(state.u, state.v);
}

double course_error(const VesselState& state, double reference_angle) {
  return wrap_angle(reference_angle - course_angle(state));
}

AdvanceResult waypoint_advance(WaypointPath& path, const Eigen::Vector2d& pos) {
  AdvanceResult result;
  if (path.waypoints.empty() || path.active_index >= path.waypoints.size())
    return result;
  const double dist = (pos - path.waypoints[path.active_index]).norm();
  if (dist < path.acceptance_radius) {
    result.reached = true;
    if (path.active_index + 1 < path.waypoints.size()) {
      ++path.active_index;
    } else {
      path.finished = true;
      result.finished = true;
    }
  }
  return result;
}

double ilos_desired_heading(IlosState& ilos, double e, double gamma_p,
                            double h) {
  if (h <= 0.0)
    throw std::invalid_argument("ilos_desired_heading: h must be > 0");
  const double shifted = e + ilos.gain * ilos.y_int;
  const double psi_d = gamma_p - std::atan(shifted / ilos.lookahead);
  const double y_int_dot = ilos.lookahead * e /
                           (ilos.lookahead * ilos.lookahead + shifted * shifted);
  ilos.y_int += y_int_dot * h;
  return psi_d;
}

double pd_rudder(double psi_d, const VesselState& state, const PdGains& gains) {
  const double err = wrap_angle(psi_d - state.psi);
  return clamp_rudder(gains.kp * err - gains.kd * state.r);
}

}  // namespace shiplab
