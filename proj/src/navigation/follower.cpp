#include "rotor/navigation/follower.hpp"

#include <algorithm>
#include <cmath>

namespace rotor::nav {

FlatAttitude flatness_attitude(const Vec3& accel_cmd, double yaw_ref, double mass, double min_force) {
  const Vec3 f = accel_cmd - Vec3(0.0, 0.0, kGravity);
  const double fn = f.norm();
  FlatAttitude out;
  if (!(fn > min_force)) return out;

  const Vec3 z_b = -f / fn;
  const Vec3 x_c(std::cos(yaw_ref), std::sin(yaw_ref), 0.0);
  const Vec3 y_raw = z_b.cross(x_c);
  if (!(y_raw.norm() > 1e-9)) return out;  // thrust axis horizontal along the heading
  const Vec3 y_b = y_raw.normalized();
  const Vec3 x_b = y_b.cross(z_b);

  // R = [x_b y_b z_b]; ZYX extraction.
  out.roll = std::atan2(y_b.z(), z_b.z());
  out.pitch = -std::asin(std::clamp(x_b.z(), -1.0, 1.0));
  out.thrust = mass * fn;
  out.valid = true;
  return out;
}

TrajectoryFollower::TrajectoryFollower(FollowerGains gains, double mass) : gains_(gains), mass_(mass) {}

AngleThrustSetpoint TrajectoryFollower::follow(const TrajectorySetpoint& sp, const est::StateVector& estimate,
                                               double dt) {
  const Vec3 v_ned = rotation_body_to_inertial(estimate.att) * estimate.v;
  const Vec3 e_p = sp.p - estimate.p;
  const Vec3 e_v = sp.v - v_ned;
  integral_ = (integral_ + e_p * dt).cwiseMax(-gains_.i_limit).cwiseMin(gains_.i_limit);

  const Vec3 a_cmd = sp.a + gains_.kp.cwiseProduct(e_p) + gains_.kd.cwiseProduct(e_v) + gains_.ki.cwiseProduct(integral_);
  const FlatAttitude att = flatness_attitude(a_cmd, sp.yaw, mass_, gains_.min_force);

  AngleThrustSetpoint out;
  out.yaw_rate = sp.yaw_rate + gains_.k_yaw * wrap_angle(sp.yaw - estimate.att.yaw);
  if (att.valid) {
    out.roll = att.roll;
    out.pitch = att.pitch;
    out.thrust = att.thrust;
  } else {
    out.roll = last_.roll;
    out.pitch = last_.pitch;
    out.thrust = gains_.min_thrust_fraction * mass_ * kGravity;
    out.warning = true;
  }
  last_ = out;
  return out;
}

ctrl::ControlCommand TrajectoryFollower::command(const ManagerOutput& m, const est::StateVector& estimate, double dt,
                                                 double now) {
  ctrl::ControlCommand cmd;
  cmd.stamp = now;
  if (m.leg != last_leg_) {
    reset_integral();
    last_leg_ = m.leg;
  }
  if (m.phase == Phase::kTakeoff) {
    const double climb = std::clamp(gains_.takeoff_kp * (m.sp.p.z() - estimate.p.z()), -gains_.takeoff_climb_rate,
                                    gains_.takeoff_climb_rate);
    cmd.mode = static_cast<int>(ctrl::Mode::kNePosDVelYaw);
    cmd.values = {m.sp.p.x(), m.sp.p.y(), climb, m.sp.yaw};
    return cmd;
  }
  const AngleThrustSetpoint s = follow(m.sp, estimate, dt);
  cmd.mode = static_cast<int>(ctrl::Mode::kRollPitchRateThrust);
  cmd.values = {s.roll, s.pitch, s.yaw_rate, s.thrust};
  return cmd;
}

}  // namespace rotor::nav
