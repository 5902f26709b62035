#pragma once

#include <Eigen/Dense>
#include <vector>

#include "shiplab/vessel.hpp"

namespace shiplab {

/// Straight path segment from a to b, in ship lengths.
struct PathSegment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;

  double length() const { return (b - a).norm(); }
};

/// Ordered waypoint list with the active target index. The active segment
/// runs from the previously reached waypoint (or the episode start) to the
/// active waypoint.
struct WaypointPath {
  std::vector<Eigen::Vector2d> waypoints;
  Eigen::Vector2d start = Eigen::Vector2d::Zero();
  std::size_t active_index = 0;
  double acceptance_radius = 0.5;
  bool finished = false;

  bool valid() const;
};

/// Active segment and its global tangent angle.
PathSegment active_segment(const WaypointPath& path);
double path_tangent_angle(const PathSegment& seg);

/// Signed perpendicular distance from pos to the infinite line through the
/// segment; positive when pos lies to starboard of the path direction.
/// Throws std::invalid_argument for a degenerate segment.
double cross_track_error(const Eigen::Vector2d& pos, const PathSegment& seg);

/// Course angle chi = psi + beta, the direction of the global velocity
/// vector. Throws std::domain_error at zero speed.
double course_angle(const VesselState& state);

/// Course error wrapped to (-pi, pi]: wrap(reference - chi).
double course_error(const VesselState& state, double reference_angle);

struct AdvanceResult {
  bool reached = false;   ///< active waypoint entered this call
  bool finished = false;  ///< last waypoint reached
};

/// Advances the active waypoint when pos is inside the acceptance radius.
/// Idempotent otherwise.
AdvanceResult waypoint_advance(WaypointPath& path, const Eigen::Vector2d& pos);

/// Integral line-of-sight guidance state and parameters.
struct IlosState {
  double y_int = 0.0;     ///< integral of cross-track error
  double lookahead = 2.0; ///< Delta [L]
  double gain = 0.05;     ///< integral gain k
};

/// ILOS desired heading for cross-track error e against a segment with
/// tangent angle gamma_p:
///   psi_d = gamma_p - atan((e + k y_int) / Delta)
/// and the integral state advanced by
///   y_int_dot = Delta e / (Delta^2 + (e + k y_int)^2).
/// Throws std::invalid_argument for h <= 0.
double ilos_desired_heading(IlosState& ilos, double e, double gamma_p,
                            double h);

struct PdGains {
  double kp = 2.5;  ///< rad rudder per rad heading error
  double kd = 4.0;  ///< rad rudder per unit yaw rate

  bool operator==(const PdGains&) const = default;
};

/// PD heading autopilot: delta_c = Kp wrap(psi_d - psi) - Kd r, clamped to
/// +-35 degrees.
double pd_rudder(double psi_d, const VesselState& state, const PdGains& gains);

}  // namespace shiplab
