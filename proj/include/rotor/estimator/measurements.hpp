#pragma once

#include "rotor/estimator/types.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace rotor::est {

using BaroRow = Eigen::Matrix<double, 1, kStateDim>;
using GnssJac = Eigen::Matrix<double, 5, kStateDim>;
using Vec5 = Eigen::Matrix<double, 5, 1>;

class AtmosphereError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Troposphere density from the 1976 standard atmosphere, kg/m^3.
/// Valid for 0 <= alt_msl < 11000 m.
double air_density(double alt_msl);

// Barometer: h = -rho g p_d (gauge pressure relative to the init altitude).
double baro_model(const StateVector& x, double rho);
BaroRow baro_jacobian(double rho);

class DegenerateFieldError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kMinHorizontalField = 1e-9;

/// Tilt-compensated heading of a body-frame field, plus declination.
double mag_heading(const Vec3& field_body, const EulerAngles& att, double declination = 0.0);

struct MagJacobians {
  Eigen::RowVector3d F;  // d heading / d raw field
  BaroRow G;             // d heading / d state (roll and pitch slots)
};
MagJacobians mag_heading_jacobians(const Vec3& field_body, const EulerAngles& att);

/// Yaw-slot observation row.
BaroRow mag_jacobian();

struct GeoOrigin {
  double lat = 0.0;  // rad
  double lon = 0.0;  // rad
  double alt = 0.0;  // m
};

struct LocalNE {
  double north = 0.0;
  double east = 0.0;
};

/// Spherical-earth geodetic -> local north/east relative to origin.
LocalNE gnss_to_local(double lat, double lon, const GeoOrigin& origin);
/// Inverse of gnss_to_local: returns (lat, lon).
std::pair<double, double> local_to_gnss(double north, double east, const GeoOrigin& origin);

/// h = [p_n, p_e, R v].
Vec5 gnss_model(const StateVector& x);
GnssJac gnss_jacobian(const StateVector& x);
/// z = [p_n, p_e, v_n, v_e, v_d] from a raw fix.
Vec5 gnss_measurement_vector(const GnssMeasurement& m, const GeoOrigin& origin);

}  // namespace rotor::est
