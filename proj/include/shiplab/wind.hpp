#pragma once

#include "shiplab/ship_model.hpp"
#include "shiplab/vessel.hpp"

namespace shiplab {

/// Constant, uniform true wind. Direction is where the wind blows FROM,
/// measured in the global frame; speed is nondimensional by U_design.
struct WindField {
  double speed = 0.0;
  double direction = 0.0;

  bool operator==(const WindField&) const = default;
};

struct RelativeWind {
  double speed = 0.0;  ///< apparent wind speed [U]
  double gamma = 0.0;  ///< attack angle in the body frame, 0 = head wind
};

/// Apparent wind seen from the moving vessel: true wind velocity minus ship
/// velocity, rotated into the body frame. gamma > 0 means wind coming over
/// the starboard side.
RelativeWind relative_wind(const VesselState& state, const WindField& wind);

/// Quasi-steady wind loads from the tabulated coefficient curves:
///   X = 1/2 rho_ratio V^2 A_T CX(gamma)
///   Y = 1/2 rho_ratio V^2 A_L CY(gamma)
///   N = 1/2 rho_ratio V^2 A_L CN(gamma)
/// Curves are piecewise linear on [0, pi], extended by symmetry (CX even,
/// CY and CN odd).
BodyLoads wind_loads(const RelativeWind& rw, const WindCoeffs& coeffs);

/// Linear interpolation of one coefficient curve with symmetric extension.
double wind_coefficient(const std::vector<double>& angles_deg,
                        const std::vector<double>& values, double gamma,
                        bool odd);

}  // namespace shiplab
