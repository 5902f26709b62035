#include "shiplab/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace shiplab {

PdIlosController::PdIlosController(PdGains gains, double lookahead,
                                   double integral_gain, double interval)
    : gains_(gains), interval_(interval) {
  ilos_.lookahead = lookahead;
  ilos_.gain = integral_gain;
  if (interval_ <= 0.0)
    throw std::invalid_argument("PdIlosController: interval must be > 0");
}

double PdIlosController::command(const WaypointEnv& env,
                                 const Observation& obs) {
  // The integral state belongs to one segment's cross-track error; carrying
  // it across a waypoint switch injects a bogus bias into the next leg (worst
  // at curvature reversals, where the accumulated sign is exactly wrong).
  const std::size_t active = env.path().active_index;
  if (active != last_active_) {
    ilos_.y_int = 0.0;
    last_active_ = active;
  }
  const PathSegment seg = active_segment(env.path());
  const double gamma_p = path_tangent_angle(seg);
  const double psi_d =
      ilos_desired_heading(ilos_, obs.d_c, gamma_p, interval_);
  return pd_rudder(psi_d, env.state(), gains_);
}

std::vector<Scenario> build_quadrant_scenarios() {
  std::vector<Scenario> out;
  const double d = 10.0;
  const Eigen::Vector2d dests[4] = {
      {d, d}, {-d, d}, {d, -d}, {-d, -d}};
  const char* names[4] = {"quadrant-ne", "quadrant-nw", "quadrant-se",
                          "quadrant-sw"};
  for (int i = 0; i < 4; ++i) {
    Scenario s;
    s.name = names[i];
    s.path.waypoints = {dests[i]};
    s.path.start = Eigen::Vector2d::Zero();
    s.path.acceptance_radius = 0.5;
    s.initial = VesselState{};
    s.initial.u = 1.0;
    s.max_steps = 160;
    out.push_back(std::move(s));
  }
  return out;
}

Scenario build_ellipse_scenario() {
  Scenario s;
  s.name = "ellipse";
  const double a = 14.0, b = 10.0;
  const int n = 15;
  for (int k = 1; k <= n; ++k) {
    const double theta = 2.0 * M_PI * k / n;
    s.path.waypoints.emplace_back(a * std::cos(theta), b * std::sin(theta));
  }
  s.path.start = {a, 0.0};
  s.path.acceptance_radius = 0.5;
  s.initial = VesselState{};
  s.initial.x = a;
  s.initial.psi = M_PI / 2;
  s.initial.u = 1.0;
  // Perimeter just under 76 L at ~1 L per 0.3-interval step.
  s.max_steps = 600;
  return s;
}

Scenario build_figure8_scenario() {
  Scenario s;
  s.name = "figure8";
  const double R = 9.0;
  // Two tangent circles stacked above the origin. The course leaves the
  // origin heading +x (tangent to the lower circle), climbs its east side,
  // rounds the upper circle the opposite way, then descends the lower
  // circle's west side back to the start. Tangent direction is continuous
  // at both crossing passages, and the start tangent matches the zero
  // initial heading.
  const Eigen::Vector2d c1(0.0, R), c2(0.0, 3.0 * R);
  const int n = 23;
  const double total = 4.0 * M_PI * R;  // half of circle 1, all of circle 2,
                                        // half of circle 1 again
  for (int k = 1; k <= n; ++k) {
    const double arc = total * k / n;
    Eigen::Vector2d p;
    if (arc <= M_PI * R) {  // east half of circle 1, counterclockwise
      const double phi = -M_PI / 2.0 + arc / R;
      p = c1 + R * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    } else if (arc <= 3.0 * M_PI * R) {  // full loop of circle 2, clockwise
      const double phi = -M_PI / 2.0 - (arc - M_PI * R) / R;
      p = c2 + R * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    } else {  // west half of circle 1, back down to the origin
      const double phi = M_PI / 2.0 + (arc - 3.0 * M_PI * R) / R;
      p = c1 + R * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    }
    s.path.waypoints.push_back(p);
  }
  s.path.start = Eigen::Vector2d::Zero();
  s.path.acceptance_radius = 0.5;
  s.initial = VesselState{};
  s.initial.u = 1.0;
  // Total arc length 36 pi (about 113 L).
  s.max_steps = 900;
  return s;
}

Metrics metrics_from_rows(const std::vector<TraceRow>& rows) {
  Metrics m;
  double sum_dc2 = 0.0, sum_delta2 = 0.0, travel = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sum_dc2 += rows[i].d_c * rows[i].d_c;
    sum_delta2 += rows[i].delta * rows[i].delta;
    if (i > 0) travel += std::abs(rows[i].delta - rows[i - 1].delta);
  }
  const double n = double(rows.size());
  m.rms_cross_track = n > 0 ? std::sqrt(sum_dc2 / n) : 0.0;
  m.effort_rms = n > 0 ? std::sqrt(sum_delta2 / n) : 0.0;
  m.rudder_travel = travel;
  m.steps_used = int(rows.size());
  return m;
}

EpisodeRecord run_scenario(const ShipModel& ship, const Scenario& scenario,
                           Controller& controller,
                           const EpisodeConfig& base_cfg) {
  EpisodeConfig cfg = base_cfg;
  cfg.max_steps = scenario.max_steps;
  WaypointEnv env(ship, cfg);
  env.set_wind(scenario.wind, scenario.wind_enabled);
  Observation obs = env.reset_path(scenario.path, scenario.initial);
  controller.begin_episode();

  EpisodeRecord record;
  record.scenario_name = scenario.name;
  record.rows.reserve(std::size_t(scenario.max_steps));

  while (!env.done()) {
    const double delta_c = controller.command(env, obs);
    const StepResult result = env.step(delta_c);
    const VesselState& st = env.state();
    obs = result.observation;

    record.rows.push_back({env.time(), st.x, st.y, st.psi, st.u, st.v, st.r,
                           st.delta, clamp_rudder(delta_c), obs.d_c, obs.chi_e,
                           result.reward});
  }

  record.outcome = env.outcome();
  record.metrics = metrics_from_rows(record.rows);
  record.metrics.success = env.outcome() == Outcome::success;
  return record;
}

double improvement_percent(double rms_a, double rms_b) {
  if (rms_b == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (rms_b - rms_a) / rms_b * 100.0;
}

std::string compare_report(const std::vector<EpisodeRecord>& a,
                           const std::vector<EpisodeRecord>& b,
                           const std::string& name_a,
                           const std::string& name_b) {
  std::ostringstream os;
  os << "scenario            | controller | rms_d_c [L] | rms_delta [rad] | "
        "travel [rad] | success | steps\n";
  os << "--------------------+------------+-------------+-----------------+-"
        "-------------+---------+------\n";
  auto row = [&os](const EpisodeRecord& r, const std::string& name) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%-19s | %-10s | %11.4f | %15.4f | %12.3f | %-7s | %5d\n",
                  r.scenario_name.c_str(), name.c_str(),
                  r.metrics.rms_cross_track, r.metrics.effort_rms,
                  r.metrics.rudder_travel, r.metrics.success ? "yes" : "no",
                  r.metrics.steps_used);
    os << buf;
  };
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    row(a[i], name_a);
    row(b[i], name_b);
    const double imp = improvement_percent(a[i].metrics.rms_cross_track,
                                           b[i].metrics.rms_cross_track);
    os << "  cross-track improvement of " << name_a << " over " << name_b
       << ": ";
    if (std::isnan(imp))
      os << "n/a\n";
    else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.1f%%\n", imp);
      os << buf;
    }
  }
  os << "reference improvements for context: 8% (calm water), 7.5% (wind)\n";
  return os.str();
}

}  // namespace shiplab
