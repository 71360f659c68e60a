#include "rotor/math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rotor {

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Mat3 rotation_body_to_inertial(const EulerAngles& e) {
  const double cp = std::cos(e.roll), sp = std::sin(e.roll);
  const double ct = std::cos(e.pitch), st = std::sin(e.pitch);
  const double cs = std::cos(e.yaw), ss = std::sin(e.yaw);
  Mat3 R;
  R << ct * cs, sp * st * cs - cp * ss, cp * st * cs + sp * ss,
       ct * ss, sp * st * ss + cp * cs, cp * st * ss - sp * cs,
       -st,     sp * ct,                cp * ct;
  return R;
}

Mat3 rotation_body_to_vehicle1(double roll, double pitch) {
  return rotation_body_to_inertial({roll, pitch, 0.0});
}

Mat3 euler_kinematics(const EulerAngles& e, double guard) {
  if (!(std::abs(e.pitch) < kPi / 2.0 - guard)) {
    throw GimbalError("pitch " + std::to_string(e.pitch) + " rad inside gimbal guard");
  }
  const double cp = std::cos(e.roll), sp = std::sin(e.roll);
  const double ct = std::cos(e.pitch), tt = std::tan(e.pitch);
  Mat3 S;
  S << 1.0, sp * tt,  cp * tt,
       0.0, cp,       -sp,
       0.0, sp / ct,  cp / ct;
  return S;
}

Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

Smoothstep quintic_smoothstep(double tau) {
  const double t = std::clamp(tau, 0.0, 1.0);
  const double t2 = t * t;
  const double t3 = t2 * t;
  return {
      t3 * (10.0 + t * (-15.0 + 6.0 * t)),
      30.0 * t2 * (1.0 - t) * (1.0 - t),
      60.0 * t * (1.0 - t) * (1.0 - 2.0 * t),
  };
}

}  // namespace rotor
