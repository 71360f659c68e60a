#include "rotor/estimator/measurements.hpp"

#include "rotor/estimator/ekf_math.hpp"

#include <cmath>
#include <string>

namespace rotor::est {

namespace {
constexpr double kSeaLevelTemp = 288.15;       // K
constexpr double kSeaLevelPressure = 101325.0;  // Pa
constexpr double kLapseRate = 0.0065;           // K/m
constexpr double kGasConstantAir = 287.053;     // J/(kg K)
constexpr double kTropopause = 11000.0;         // m
}  // namespace

double air_density(double alt_msl) {
  if (!(alt_msl >= 0.0 && alt_msl < kTropopause)) {
    throw AtmosphereError("altitude " + std::to_string(alt_msl) + " m outside the troposphere model");
  }
  const double T = kSeaLevelTemp - kLapseRate * alt_msl;
  const double P = kSeaLevelPressure * std::pow(T / kSeaLevelTemp, kGravity / (kLapseRate * kGasConstantAir));
  return P / (kGasConstantAir * T);
}

double baro_model(const StateVector& x, double rho) { return -rho * kGravity * x.p.z(); }

BaroRow baro_jacobian(double rho) {
  BaroRow C = BaroRow::Zero();
  C(kPos + 2) = -rho * kGravity;
  return C;
}

double mag_heading(const Vec3& field_body, const EulerAngles& att, double declination) {
  const double n = field_body.norm();
  if (!(n > 0.0)) throw DegenerateFieldError("zero magnetic field");
  const Vec3 u = rotation_body_to_vehicle1(att.roll, att.pitch) * (field_body / n);
  if (std::hypot(u.x(), u.y()) <= kMinHorizontalField) {
    throw DegenerateFieldError("magnetic field is vertical");
  }
  // The field's angle in the vehicle-1 frame is (declination - yaw).
  return wrap_angle(std::atan2(-u.y(), u.x()) + declination);
}

MagJacobians mag_heading_jacobians(const Vec3& field_body, const EulerAngles& att) {
  const Mat3 Rv1 = rotation_body_to_vehicle1(att.roll, att.pitch);
  const Vec3 u = Rv1 * field_body;
  const double r2 = u.x() * u.x() + u.y() * u.y();
  if (std::sqrt(r2) <= kMinHorizontalField * field_body.norm() || !(r2 > 0.0)) {
    throw DegenerateFieldError("magnetic field is vertical");
  }
  const Eigen::RowVector3d dz_du(u.y() / r2, -u.x() / r2, 0.0);

  MagJacobians J;
  J.F = dz_du * Rv1;
  J.G = BaroRow::Zero();
  const auto dR = rotation_partials({att.roll, att.pitch, 0.0});
  J.G(kAtt) = dz_du * (dR[0] * field_body);
  J.G(kAtt + 1) = dz_du * (dR[1] * field_body);
  return J;
}

BaroRow mag_jacobian() {
  BaroRow C = BaroRow::Zero();
  C(kAtt + 2) = 1.0;
  return C;
}

LocalNE gnss_to_local(double lat, double lon, const GeoOrigin& origin) {
  return {(lat - origin.lat) * kEarthRadius, (lon - origin.lon) * kEarthRadius * std::cos(lat)};
}

std::pair<double, double> local_to_gnss(double north, double east, const GeoOrigin& origin) {
  const double lat = origin.lat + north / kEarthRadius;
  const double lon = origin.lon + east / (kEarthRadius * std::cos(lat));
  return {lat, lon};
}

Vec5 gnss_model(const StateVector& x) {
  Vec5 h;
  h << x.p.x(), x.p.y(), rotation_body_to_inertial(x.att) * x.v;
  return h;
}

GnssJac gnss_jacobian(const StateVector& x) {
  GnssJac C = GnssJac::Zero();
  C(0, kPos) = 1.0;
  C(1, kPos + 1) = 1.0;
  C.block<3, 3>(2, kVel) = rotation_body_to_inertial(x.att);
  C.block<3, 3>(2, kAtt) = d_rotate_d_euler(x.att, x.v);
  return C;
}

Vec5 gnss_measurement_vector(const GnssMeasurement& m, const GeoOrigin& origin) {
  const LocalNE ne = gnss_to_local(m.lat, m.lon, origin);
  Vec5 z;
  z << ne.north, ne.east, m.vel_ned;
  return z;
}

}  // namespace rotor::est
