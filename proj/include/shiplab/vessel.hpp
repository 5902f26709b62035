#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace shiplab {

/// Rudder angle limit, 35 degrees.
inline constexpr double kMaxRudder = 35.0 * M_PI / 180.0;

/// Kinematic state of the vessel, all nondimensional:
/// positions in ship lengths L, velocities by design speed U, yaw rate by
/// U/L, angles in radians. The global frame is earth-fixed with x north,
/// y east, z down; the body frame has x to the bow, y to starboard.
struct VesselState {
  double x = 0.0;      ///< global position, north component [L]
  double y = 0.0;      ///< global position, east component [L]
  double psi = 0.0;    ///< heading angle, unwrapped [rad]
  double u = 0.0;      ///< surge velocity [U]
  double v = 0.0;      ///< sway velocity [U]
  double r = 0.0;      ///< yaw rate [U/L]
  double delta = 0.0;  ///< actual rudder angle [rad], |delta| <= 35 deg

  double speed() const { return std::hypot(u, v); }
};

struct ControlInput {
  double delta_c = 0.0;  ///< commanded rudder angle [rad], |delta_c| <= 35 deg
  double n_prop = 0.0;   ///< propeller revolution rate [1 / nondim time]
};

/// Body-frame loads, nondimensionalized by (1/2) rho U^2 L T for forces
/// and (1/2) rho U^2 L^2 T for the yaw moment.
struct BodyLoads {
  double X = 0.0;
  double Y = 0.0;
  double N = 0.0;

  BodyLoads& operator+=(const BodyLoads& o) {
    X += o.X;
    Y += o.Y;
    N += o.N;
    return *this;
  }
};

inline BodyLoads operator+(BodyLoads a, const BodyLoads& b) { return a += b; }

/// Rotation matrix from the body frame to the global frame.
inline Eigen::Matrix3d rotation_matrix(double psi) {
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  Eigen::Matrix3d R;
  R << c, -s, 0.0,
       s,  c, 0.0,
       0.0, 0.0, 1.0;
  return R;
}

/// Global-frame pose rates (x_dot, y_dot, psi_dot) = R(psi) * [u, v, r].
inline Eigen::Vector3d kinematics(const VesselState& s) {
  return rotation_matrix(s.psi) * Eigen::Vector3d(s.u, s.v, s.r);
}

/// Drift angle beta = atan(-v/u), quadrant aware. Zero at rest by convention.
inline double drift_angle(double u, double v) {
  if (u == 0.0 && v == 0.0) return 0.0;
  return std::atan2(-v, u);
}

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

inline double clamp_rudder(double delta) {
  return std::clamp(delta, -kMaxRudder, kMaxRudder);
}

}  // namespace shiplab
