#pragma once

#include "shiplab/ship_model.hpp"
#include "shiplab/vessel.hpp"

namespace shiplab {

/// Classical fourth-order Runge-Kutta step for dx/dt = f(t, x).
/// State must support scalar multiply and addition (double, Eigen vectors).
template <class State, class Deriv>
State rk4_advance(const State& x, double t, double h, Deriv&& f) {
  const State k1 = f(t, x);
  const State k2 = f(t + 0.5 * h, x + (0.5 * h) * k1);
  const State k3 = f(t + 0.5 * h, x + (0.5 * h) * k2);
  const State k4 = f(t + h, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Accelerations {
  double u_dot = 0.0;
  double v_dot = 0.0;
  double r_dot = 0.0;
};

/// Hull forces from the cubic polynomial model in (v', r'), where v' and r'
/// are referenced to the instantaneous resultant speed. Output on the
/// design-speed divisors.
BodyLoads hull_loads(const ShipModel& ship, double u, double v, double r);

/// Propeller surge force X_P = (1 - t_P) T with quadratic K_T(J).
double propeller_surge_force(const ShipModel& ship, double u, double n);

/// Rudder normal-force model with hull interaction and propeller race.
BodyLoads rudder_loads(const ShipModel& ship, double u, double v, double r,
                       double delta, double n);

/// Solves the 3-DOF rigid-body equations for the accelerations, given the
/// summed hull + propeller + rudder loads plus `external` (wind) loads:
///   (m+m_x) u_dot - (m+m_y) v r - m x_G r^2 = X
///   (m+m_y) v_dot + (m+m_x) u r + m x_G r_dot = Y
///   (I_zz+J_zz+m x_G^2) r_dot + m x_G (v_dot + u r) = N
/// The sway/yaw pair is solved as a 2x2 linear system.
Accelerations mmg_derivatives(const ShipModel& ship, const VesselState& state,
                              const ControlInput& ctrl,
                              const BodyLoads& external);

/// Advances the actual rudder angle toward delta_c over a time h under
/// delta_dot = clamp((delta_c - delta)/T_E, +-rate_max), integrated in
/// closed form (linear while rate saturated, then exponential).
/// Result clamped to +-35 degrees. Throws std::invalid_argument for h <= 0.
double rudder_step(const ShipModel& ship, double delta, double delta_c,
                   double h);

/// One RK4 step of the 6-state ODE (x, y, psi, u, v, r). The rudder angle
/// follows its exact closed-form trajectory within the step and is sampled
/// at the RK4 stage times. `external` loads are held constant over the
/// step. Throws std::runtime_error on a non-finite derivative.
VesselState rk4_step(const ShipModel& ship, const VesselState& state,
                     const ControlInput& ctrl, const BodyLoads& external,
                     double h);

/// Propeller revolution rate balancing total surge force at (u=1, v=r=0,
/// delta=0), found by bisection on total X. Tolerance on the bracket width.
double self_propulsion_rate(const ShipModel& ship, double tol = 1e-10);

enum class Quantity { length, velocity, yaw_rate, time, force, moment };

/// Prime-II scaling: dimensional -> nondimensional. Forces by
/// 0.5 rho U^2 L T, moments by 0.5 rho U^2 L^2 T, lengths by L,
/// velocities by U, time by L/U, yaw rate by U/L.
double prime_scale(const ShipModel& ship, double value, Quantity kind);

/// Inverse of prime_scale.
double prime_unscale(const ShipModel& ship, double value, Quantity kind);

}  // namespace shiplab
