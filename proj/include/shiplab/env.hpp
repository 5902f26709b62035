#pragma once

#include <Eigen/Dense>

#include "shiplab/guidance.hpp"
#include "shiplab/rng.hpp"
#include "shiplab/ship_model.hpp"
#include "shiplab/vessel.hpp"
#include "shiplab/wind.hpp"

namespace shiplab {

/// Agent-facing state: cross-track error and destination distance in ship
/// lengths, course error in radians wrapped to (-pi, pi], yaw rate nondim.
struct Observation {
  double d_c = 0.0;
  double chi_e = 0.0;
  double d_wp = 0.0;
  double r = 0.0;

  Eigen::Vector4d vector() const { return {d_c, chi_e, d_wp, r}; }
};

enum class Outcome { running, success, timeout, missed };

struct EpisodeConfig {
  double dest_min = 8.0;           ///< spawn distance range [L]
  double dest_max = 28.0;
  int max_steps = 160;
  double control_interval = 0.3;   ///< nondim time per action
  double substep = 0.1;            ///< RK4 step within a control interval
  double terminal_bonus = 100.0;
  double success_radius = 0.5;     ///< strict-inside acceptance [L]
  bool normalize_r3 = false;       ///< r3 divides d_wp by the spawn distance

  void validate() const;  ///< throws std::invalid_argument
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  Outcome outcome = Outcome::running;
};

/// Per-step reward before any terminal bonus:
///   r1 = 2 exp(-d_c^2 / 12.5) - 1
///   r2 = 1.3 exp(-10 |chi_e|) - 0.3
///   r3 = -d_wp / 4
double step_reward(const Observation& obs);

/// Waypoint-tracking MDP around the maneuvering model. One instance is
/// single-threaded; run several instances for parallel rollouts.
class WaypointEnv {
 public:
  WaypointEnv(ShipModel ship, EpisodeConfig cfg);

  /// Constant uniform wind applied during integration. Disabled or
  /// zero-speed wind takes the identical code path as no wind at all.
  void set_wind(const WindField& wind, bool enabled);

  /// Training reset: vessel at the origin with psi=0, u=1, v=r=0, delta=0;
  /// destination at uniform distance [dest_min, dest_max) and uniform angle.
  Observation reset(RngStream& rng);

  /// Reset to a fixed destination with the standard initial state.
  Observation reset_to(const Eigen::Vector2d& destination);

  /// Reset onto an arbitrary waypoint path from an arbitrary initial state
  /// (multi-waypoint evaluation). Missed-destination detection only applies
  /// to single-waypoint paths.
  Observation reset_path(const WaypointPath& path, const VesselState& init);

  /// Applies one clamped rudder command over control_interval, advances the
  /// waypoint logic, and evaluates termination in the order
  /// success -> timeout -> missed. Throws std::logic_error once done.
  StepResult step(double delta_c);

  /// True when the vessel is past the destination along-track and moving
  /// away from it.
  bool missed_destination() const;

  Observation observe() const;

  const VesselState& state() const { return state_; }
  const WaypointPath& path() const { return path_; }
  const ShipModel& ship() const { return ship_; }
  const EpisodeConfig& config() const { return cfg_; }
  double propeller_rate() const { return n_prop_; }
  int steps_used() const { return steps_; }
  double time() const { return steps_ * cfg_.control_interval; }
  Outcome outcome() const { return outcome_; }
  bool done() const { return outcome_ != Outcome::running; }

 private:
  void reset_vessel();

  ShipModel ship_;
  EpisodeConfig cfg_;
  WindField wind_;
  bool wind_enabled_ = false;
  double n_prop_;  ///< self-propulsion rate at u = 1

  VesselState state_;
  WaypointPath path_;
  int steps_ = 0;
  Outcome outcome_ = Outcome::running;
  bool single_waypoint_ = true;
  double spawn_distance_ = 1.0;
};

}  // namespace shiplab
