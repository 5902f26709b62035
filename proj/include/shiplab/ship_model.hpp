#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace shiplab {

/// Hull force polynomial coefficients, prime system (divisor 0.5 rho U^2 L T,
/// moments with an extra L). Arguments are v' = v/U and r' = r L/U formed
/// with the instantaneous resultant speed U.
struct HullCoeffs {
  double R0 = 0.0;  ///< straight-ahead resistance coefficient
  double X_vv = 0.0, X_vr = 0.0, X_rr = 0.0, X_vvvv = 0.0;
  double Y_v = 0.0, Y_r = 0.0;
  double Y_vvv = 0.0, Y_vvr = 0.0, Y_vrr = 0.0, Y_rrr = 0.0;
  double N_v = 0.0, N_r = 0.0;
  double N_vvv = 0.0, N_vvr = 0.0, N_vrr = 0.0, N_rrr = 0.0;

  bool operator==(const HullCoeffs&) const = default;
};

/// Open-water propeller data: quadratic K_T(J) with constant wake fraction
/// and thrust deduction.
struct PropCoeffs {
  double diameter = 0.0;  ///< propeller diameter [m], same scale as Lpp
  double k0 = 0.0, k1 = 0.0, k2 = 0.0;  ///< K_T = k0 + k1 J + k2 J^2
  double wake_fraction = 0.0;           ///< w_P
  double thrust_deduction = 0.0;        ///< t_P

  bool operator==(const PropCoeffs&) const = default;
};

/// Rudder normal-force model with hull/propeller interaction coefficients.
struct RudderCoeffs {
  double area_ratio = 0.0;    ///< A_R / (L T)
  double aspect_ratio = 0.0;  ///< geometric aspect ratio (for f_alpha)
  double t_R = 0.0;           ///< steering resistance deduction
  double a_H = 0.0;           ///< rudder-to-hull force increase factor
  double x_H = 0.0;           ///< point of action of a_H force [L]
  double x_R = 0.0;           ///< rudder position [L]
  double epsilon = 0.0;       ///< wake ratio rudder/propeller
  double kappa = 0.0;         ///< propeller race acceleration factor
  double eta = 0.0;           ///< D_P / rudder span
  double l_R = 0.0;           ///< effective inflow lever [L]
  double gamma_R = 0.0;       ///< flow straightening coefficient

  bool operator==(const RudderCoeffs&) const = default;
};

/// Quasi-steady wind load coefficients. Curves are tabulated against the
/// relative wind attack angle on [0, pi] and extended by symmetry
/// (CX even, CY and CN odd).
struct WindCoeffs {
  double area_front = 0.0;    ///< transverse projected area A_T / (L T)
  double area_lateral = 0.0;  ///< lateral projected area A_L / (L T)
  double rho_ratio = 0.0;     ///< air density / water density
  std::vector<double> angles_deg;  ///< breakpoints, ascending, 0..180
  std::vector<double> CX, CY, CN;  ///< load coefficients at breakpoints

  bool operator==(const WindCoeffs&) const = default;
};

/// Ship geometry, nondimensional mass properties, and the externally
/// loaded hydrodynamic coefficient tables. Read-only after load.
struct ShipModel {
  std::string name;
  double Lpp = 0.0;       ///< length between perpendiculars [m]
  double draft = 0.0;     ///< design draft [m]
  double U_design = 0.0;  ///< design (service) speed [m/s]
  double rho = 0.0;       ///< water density [kg/m^3]
  double x_G = 0.0;       ///< longitudinal CG from midship [L], +forward

  // Nondimensional mass and added-mass terms.
  double m = 0.0;
  double m_x = 0.0;
  double m_y = 0.0;
  double I_zz = 0.0;
  double J_zz = 0.0;

  HullCoeffs hull;
  PropCoeffs prop;
  RudderCoeffs rudder;
  WindCoeffs wind;

  double rudder_rate_max_deg_s = 5.0;   ///< rudder rate cap [deg/s]
  double rudder_time_constant = 0.1;    ///< first-order T_E [nondim time]

  /// One nondimensional time unit in seconds.
  double time_unit_s() const { return Lpp / U_design; }

  /// Rudder rate cap converted to rad per nondimensional time unit.
  double rudder_rate_max() const {
    return rudder_rate_max_deg_s * M_PI / 180.0 * time_unit_s();
  }

  void validate() const;  ///< throws std::invalid_argument on bad data

  /// KCS container ship at 1:75.5 model scale. Mass terms are the standard
  /// nondimensional set; hydrodynamic coefficients are representative
  /// container-hull estimates and are meant to be overridden from a ship
  /// file when better data is available.
  static ShipModel kcs();

  bool operator==(const ShipModel&) const = default;
};

/// Reads a ship coefficient file (JSON, schema_version 1, unknown keys
/// rejected). Throws std::runtime_error with a descriptive message.
ShipModel load_ship_model(const std::string& path);

/// Serializes a model to the same schema accepted by load_ship_model.
std::string ship_model_to_json(const ShipModel& model);

}  // namespace shiplab
