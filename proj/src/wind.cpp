#include "shiplab/wind.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shiplab {

RelativeWind relative_wind(const VesselState& state, const WindField& wind) {
  // True wind velocity in the global frame (blows FROM `direction`).
  const double wx = -wind.speed * std::cos(wind.direction);
  const double wy = -wind.speed * std::sin(wind.direction);

  // Ship velocity in the global frame.
  const double c = std::cos(state.psi);
  const double s = std::sin(state.psi);
  const double sx = state.u * c - state.v * s;
  const double sy = state.u * s + state.v * c;

  // Air velocity relative to the ship, rotated into the body frame.
  const double rx = wx - sx;
  const double ry = wy - sy;
  const double bx = c * rx + s * ry;
  const double by = -s * rx + c * ry;

  RelativeWind out;
  out.speed = std::hypot(bx, by);
  out.gamma = (out.speed > 0.0) ? std::atan2(-by, -bx) : 0.0;
  return out;
}

double wind_coefficient(const std::vector<double>& angles_deg,
                        const std::vector<double>& values, double gamma,
                        bool odd) {
  if (angles_deg.size() < 2 || angles_deg.size() != values.size())
    throw std::invalid_argument("wind_coefficient: bad table");

  const double w = wrap_angle(gamma);
  const double sign = (odd && w < 0.0) ? -1.0 : 1.0;
  double a = std::abs(w) * 180.0 / M_PI;
  a = std::clamp(a, angles_deg.front(), angles_deg.back());

  auto hi = std::upper_bound(angles_deg.begin(), angles_deg.end(), a);
  if (hi == angles_deg.begin()) ++hi;
  if (hi == angles_deg.end()) --hi;
  const std::size_t i = static_cast<std::size_t>(hi - angles_deg.begin());
  const double a0 = angles_deg[i - 1], a1 = angles_deg[i];
  const double t = (a - a0) / (a1 - a0);
  return sign * ((1.0 - t) * values[i - 1] + t * values[i]);
}

BodyLoads wind_loads(const RelativeWind& rw, const WindCoeffs& coeffs) {
  if (rw.speed <= 0.0) return {};
  const double q = 0.5 * coeffs.rho_ratio * rw.speed * rw.speed;
  BodyLoads out;
  out.X = q * coeffs.area_front *
          wind_coefficient(coeffs.angles_deg, coeffs.CX, rw.gamma, false);
  out.Y = q * coeffs.area_lateral *
          wind_coefficient(coeffs.angles_deg, coeffs.CY, rw.gamma, true);
  out.N = q * coeffs.area_lateral *
          wind_coefficient(coeffs.angles_deg, coeffs.CN, rw.gamma, true);
  return out;
}

}  // namespace shiplab
