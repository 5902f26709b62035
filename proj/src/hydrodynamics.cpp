#include "shiplab/hydrodynamics.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shiplab {

BodyLoads hull_loads(const ShipModel& ship, double u, double v, double r) {
  const double s2 = u * u + v * v;
  if (s2 < 1e-24) return {};  // dead in the water, no hydrodynamic load
  const double s = std::sqrt(s2);

  // Velocities referenced to the instantaneous resultant speed; the
  // polynomial is evaluated there and scaled back by s^2 onto the
  // design-speed divisor.
  const double vm = v / s;
  const double rn = r / s;
  const HullCoeffs& c = ship.hull;

  const double X = -c.R0 + c.X_vv * vm * vm + c.X_vr * vm * rn +
                   c.X_rr * rn * rn + c.X_vvvv * vm * vm * vm * vm;
  const double Y = c.Y_v * vm + c.Y_r * rn + c.Y_vvv * vm * vm * vm +
                   c.Y_vvr * vm * vm * rn + c.Y_vrr * vm * rn * rn +
                   c.Y_rrr * rn * rn * rn;
  const double N = c.N_v * vm + c.N_r * rn + c.N_vvv * vm * vm * vm +
                   c.N_vvr * vm * vm * rn + c.N_vrr * vm * rn * rn +
                   c.N_rrr * rn * rn * rn;

  return {s2 * X, s2 * Y, s2 * N};
}

namespace {

double advance_ratio(const ShipModel& ship, double u, double n) {
  const double d = ship.prop.diameter / ship.Lpp;
  if (n <= 0.0) return 0.0;
  return u * (1.0 - ship.prop.wake_fraction) / (n * d);
}

double thrust_coefficient(const ShipModel& ship, double J) {
  const PropCoeffs& p = ship.prop;
  return p.k0 + p.k1 * J + p.k2 * J * J;
}

}  // namespace

double propeller_surge_force(const ShipModel& ship, double u, double n) {
  if (n <= 0.0) return 0.0;
  const double d = ship.prop.diameter / ship.Lpp;
  const double J = advance_ratio(ship, u, n);
  const double kt = std::max(thrust_coefficient(ship, J), 0.0);
  // T = rho n^2 D^4 K_T on the force divisor 0.5 rho U^2 L T.
  const double thrust = 2.0 * (ship.Lpp / ship.draft) * d * d * d * d * n * n * kt;
  return (1.0 - ship.prop.thrust_deduction) * thrust;
}

BodyLoads rudder_loads(const ShipModel& ship, double u, double v, double r,
                       double delta, double n) {
  const RudderCoeffs& c = ship.rudder;

  // Longitudinal inflow: wake-reduced surge flow accelerated by the
  // propeller race over the fraction eta of the rudder span.
  const double uw = u * (1.0 - ship.prop.wake_fraction);
  double race = 1.0;
  const double J = advance_ratio(ship, u, n);
  if (n > 0.0 && J > 1e-12) {
    const double kt = std::max(thrust_coefficient(ship, J), 0.0);
    const double g = 1.0 + c.kappa * (std::sqrt(1.0 + 8.0 * kt / (M_PI * J * J)) - 1.0);
    race = c.eta * g * g + (1.0 - c.eta);
  }
  const double uR2 = c.epsilon * c.epsilon * uw * uw * race;
  const double uR = std::sqrt(std::max(uR2, 0.0));

  // Lateral inflow with flow straightening.
  const double vR = c.gamma_R * (v + c.l_R * r);

  const double UR2 = uR * uR + vR * vR;
  if (UR2 < 1e-24) return {};
  const double alpha = delta - std::atan2(vR, uR);

  const double f_alpha = 6.13 * c.aspect_ratio / (c.aspect_ratio + 2.25);
  const double FN = c.area_ratio * f_alpha * UR2 * std::sin(alpha);

  BodyLoads out;
  out.X = -(1.0 - c.t_R) * FN * std::sin(delta);
  out.Y = -(1.0 + c.a_H) * FN * std::cos(delta);
  out.N = -(c.x_R + c.a_H * c.x_H) * FN * std::cos(delta);
  return out;
}

Accelerations mmg_derivatives(const ShipModel& ship, const VesselState& st,
                              const ControlInput& ctrl,
                              const BodyLoads& external) {
  BodyLoads total = hull_loads(ship, st.u, st.v, st.r);
  total.X += propeller_surge_force(ship, st.u, ctrl.n_prop);
  total += rudder_loads(ship, st.u, st.v, st.r, st.delta, ctrl.n_prop);
  total += external;

  const double mu = ship.m + ship.m_x;
  const double mv = ship.m + ship.m_y;
  const double mxg = ship.m * ship.x_G;
  const double izz = ship.I_zz + ship.J_zz + mxg * ship.x_G;

  Accelerations acc;
  acc.u_dot = (total.X + mv * st.v * st.r + mxg * st.r * st.r) / mu;

  // Sway/yaw pair:  [mv  mxg] [v_dot]   [Y - mu u r  ]
  //                 [mxg izz] [r_dot] = [N - mxg u r ]
  const double b1 = total.Y - mu * st.u * st.r;
  const double b2 = total.N - mxg * st.u * st.r;
  const double det = mv * izz - mxg * mxg;
  assert(det > 0.0 && "mass matrix must be positive definite");
  acc.v_dot = (izz * b1 - mxg * b2) / det;
  acc.r_dot = (mv * b2 - mxg * b1) / det;
  return acc;
}

double rudder_step(const ShipModel& ship, double delta, double delta_c,
                   double h) {
  if (h <= 0.0) throw std::invalid_argument("rudder_step: h must be > 0");
  delta_c = clamp_rudder(delta_c);

  const double rate = ship.rudder_rate_max();
  const double te = ship.rudder_time_constant;
  const double sat = rate * te;  // error magnitude where the rate saturates

  double err = delta_c - delta;
  const double sign = err >= 0.0 ? 1.0 : -1.0;
  double mag = std::abs(err);
  double remaining = h;

  if (mag > sat) {
    const double t_sat = (mag - sat) / rate;  // time spent at the rate cap
    if (remaining <= t_sat) {
      return clamp_rudder(delta + sign * rate * remaining);
    }
    mag = sat;
    remaining -= t_sat;
  }
  mag *= std::exp(-remaining / te);
  return clamp_rudder(delta_c - sign * mag);
}

VesselState rk4_step(const ShipModel& ship, const VesselState& state,
                     const ControlInput& ctrl, const BodyLoads& external,
                     double h) {
  // The rudder trajectory over the step is known in closed form and is
  // independent of the 6 integrated states; sample it at the stage times.
  const double d0 = state.delta;
  const double d_half = rudder_step(ship, d0, ctrl.delta_c, 0.5 * h);
  const double d_full = rudder_step(ship, d0, ctrl.delta_c, h);

  using Vec6 = Eigen::Matrix<double, 6, 1>;
  Vec6 x0;
  x0 << state.x, state.y, state.psi, state.u, state.v, state.r;

  auto deriv = [&](double t, const Vec6& x) -> Vec6 {
    VesselState s;
    s.x = x[0];
    s.y = x[1];
    s.psi = x[2];
    s.u = x[3];
    s.v = x[4];
    s.r = x[5];
    s.delta = (t <= 0.0) ? d0 : (t < h ? d_half : d_full);

    const Eigen::Vector3d pose_rate = kinematics(s);
    const Accelerations acc = mmg_derivatives(ship, s, ctrl, external);
    Vec6 dx;
    dx << pose_rate[0], pose_rate[1], pose_rate[2], acc.u_dot, acc.v_dot,
        acc.r_dot;
    if (!dx.allFinite()) {
      std::ostringstream os;
      os << "rk4_step: non-finite derivative at state (u=" << s.u
         << ", v=" << s.v << ", r=" << s.r << ", psi=" << s.psi << ")";
      throw std::runtime_error(os.str());
    }
    return dx;
  };

  const Vec6 x1 = rk4_advance(x0, 0.0, h, deriv);
  VesselState out = state;
  out.x = x1[0];
  out.y = x1[1];
  out.psi = x1[2];
  out.u = x1[3];
  out.v = x1[4];
  out.r = x1[5];
  out.delta = d_full;
  return out;
}

double self_propulsion_rate(const ShipModel& ship, double tol) {
  auto total_x = [&](double n) {
    const VesselState s{.x = 0, .y = 0, .psi = 0, .u = 1, .v = 0, .r = 0,
                        .delta = 0};
    BodyLoads loads = hull_loads(ship, s.u, s.v, s.r);
    loads.X += propeller_surge_force(ship, s.u, n);
    loads += rudder_loads(ship, s.u, s.v, s.r, s.delta, n);
    return loads.X;
  };

  double lo = 1e-6, hi = 1.0;
  while (total_x(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e7)
      throw std::runtime_error(
          "self_propulsion_rate: no bracketing revolution rate found");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (total_x(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double prime_scale(const ShipModel& ship, double value, Quantity kind) {
  const double L = ship.Lpp;
  const double U = ship.U_design;
  const double q = 0.5 * ship.rho * U * U * L * ship.draft;
  switch (kind) {
    case Quantity::length:
      return value / L;
    case Quantity::velocity:
      return value / U;
    case Quantity::yaw_rate:
      return value / (U / L);
    case Quantity::time:
      return value / (L / U);
    case Quantity::force:
      return value / q;
    case Quantity::moment:
      return value / (q * L);
  }
  throw std::invalid_argument("prime_scale: unknown quantity kind");
}

double prime_unscale(const ShipModel& ship, double value, Quantity kind) {
  const double L = ship.Lpp;
  const double U = ship.U_design;
  const double q = 0.5 * ship.rho * U * U * L * ship.draft;
  switch (kind) {
    case Quantity::length:
      return value * L;
    case Quantity::velocity:
      return value * U;
    case Quantity::yaw_rate:
      return value * (U / L);
    case Quantity::time:
      return value * (L / U);
    case Quantity::force:
      return value * q;
    case Quantity::moment:
      return value * (q * L);
  }
  throw std::invalid_argument("prime_unscale: unknown quantity kind");
}

}  // namespace shiplab
