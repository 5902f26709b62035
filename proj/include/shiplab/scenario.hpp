#pragma once

#include <memory>
#include <string>
#include <vector>

#include "shiplab/ddpg.hpp"
#include "shiplab/env.hpp"
#include "shiplab/guidance.hpp"

namespace shiplab {

/// A named evaluation setup: path, initial state, optional wind, step
/// budget. The controller is supplied separately at run time.
struct Scenario {
  std::string name;
  WaypointPath path;
  VesselState initial;
  WindField wind;
  bool wind_enabled = false;
  int max_steps = 160;
};

struct Metrics {
  double rms_cross_track = 0.0;  ///< [L]
  double effort_rms = 0.0;       ///< RMS rudder angle [rad]
  double rudder_travel = 0.0;    ///< integral of |d delta| over the run [rad]
  bool success = false;
  int steps_used = 0;
};

struct TraceRow {
  double t, x, y, psi, u, v, r, delta, delta_c, d_c, chi_e, reward;
};

struct EpisodeRecord {
  std::string scenario_name;
  std::vector<TraceRow> rows;  ///< one row per control step
  Metrics metrics;
  Outcome outcome = Outcome::running;
};

/// Rudder command source for evaluation rollouts (no exploration noise).
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void begin_episode() {}
  virtual double command(const WaypointEnv& env, const Observation& obs) = 0;
  virtual std::string name() const = 0;
};

/// Path-following baseline: integral line-of-sight heading reference on the
/// active segment, tracked by the PD heading autopilot.
class PdIlosController : public Controller {
 public:
  PdIlosController(PdGains gains, double lookahead, double integral_gain,
                   double interval);

  void begin_episode() override {
    ilos_.y_int = 0.0;
    last_active_ = 0;
  }
  double command(const WaypointEnv& env, const Observation& obs) override;
  std::string name() const override { return "pd-ilos"; }

 private:
  PdGains gains_;
  IlosState ilos_;
  double interval_;  ///< integrator step = control interval
  std::size_t last_active_ = 0;  ///< integrator resets on segment change
};

/// Wraps a trained agent's deterministic policy.
class DdpgController : public Controller {
 public:
  explicit DdpgController(DdpgAgent agent) : agent_(std::move(agent)) {}

  double command(const WaypointEnv&, const Observation& obs) override {
    return agent_.act(obs.vector());
  }
  std::string name() const override { return "ddpg"; }

 private:
  DdpgAgent agent_;
};

/// The four single-waypoint probes: destinations (+-10 L, +-10 L) from the
/// standard start (origin, psi = 0, u = 1).
std::vector<Scenario> build_quadrant_scenarios();

/// 15 waypoints on an ellipse with semi-axes 14 L / 10 L at uniform
/// parameter angle, starting from (14, 0) heading pi/2.
Scenario build_ellipse_scenario();

/// Figure-8 over two externally tangent 9 L circles stacked above the
/// origin, 23 waypoints at uniform arc length. Starts at the origin with
/// heading 0, tangent to the lower circle.
Scenario build_figure8_scenario();

/// Integral metrics recomputed from a recorded trace: RMS cross-track and
/// rudder over the rows, rudder travel summed between consecutive rows, and
/// steps_used = row count. Everything derivable from a trace file alone;
/// the success flag is not, and stays false here.
Metrics metrics_from_rows(const std::vector<TraceRow>& rows);

/// Deterministic closed-loop rollout of one scenario; returns the per-step
/// trace and aggregate metrics (metrics_from_rows plus the outcome). The
/// base config supplies control interval, substep, and reward bookkeeping;
/// max_steps comes from the scenario.
EpisodeRecord run_scenario(const ShipModel& ship, const Scenario& scenario,
                           Controller& controller,
                           const EpisodeConfig& base_cfg = {});

/// (rms_b - rms_a) / rms_b * 100; NaN when rms_b is zero.
double improvement_percent(double rms_a, double rms_b);

/// Two-controller comparison table (text) for a list of scenario records.
std::string compare_report(const std::vector<EpisodeRecord>& a,
                           const std::vector<EpisodeRecord>& b,
                           const std::string& name_a,
                           const std::string& name_b);

}  // namespace shiplab
