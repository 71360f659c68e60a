#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace rotor {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kGravity = 9.80665;       // m/s^2
inline constexpr double kEarthRadius = 6378137.0;  // m, spherical earth
inline constexpr double kDefaultGimbalGuard = 1e-3;

inline constexpr double deg2rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

/// ZYX Euler angles (roll, pitch, yaw), radians.
struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  Vec3 vec() const { return {roll, pitch, yaw}; }
  static EulerAngles from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

/// Raised when pitch is within the configured guard of +/-90 degrees.
class GimbalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// R_b^i for the ZYX convention: v_inertial = R * v_body.
Mat3 rotation_body_to_inertial(const EulerAngles& e);

/// De-rolls and de-pitches a body vector into the vehicle-1 frame
/// (yawed inertial frame).
Mat3 rotation_body_to_vehicle1(double roll, double pitch);

/// S(theta): maps body rates to Euler angle rates. Throws GimbalError when
/// |pitch| >= pi/2 - guard.
Mat3 euler_kinematics(const EulerAngles& e, double guard = kDefaultGimbalGuard);

/// Skew-symmetric cross-product matrix, [w]x v = w x v.
Mat3 skew(const Vec3& w);

struct Smoothstep {
  double value;
  double d1;  // d sigma / d tau
  double d2;  // d^2 sigma / d tau^2
};

/// Quintic smoothstep 6t^5 - 15t^4 + 10t^3. tau is clamped to [0, 1].
Smoothstep quintic_smoothstep(double tau);

/// Peak slope of the quintic smoothstep, attained at tau = 0.5.
inline constexpr double kSmoothstepPeakSlope = 1.875;

}  // namespace rotor
