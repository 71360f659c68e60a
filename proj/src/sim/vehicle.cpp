#include "rotor/sim/vehicle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace rotor::sim {

namespace {

using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat4 = Eigen::Matrix4d;

// Columns: motor i's contribution to (T, Qx, Qy, Qz).
Mat4 allocation_matrix(const VehicleParams& p) {
  const double d = p.arm_length / std::sqrt(2.0);
  const double k = p.torque_coeff;
  // FR, BL, FL, BR
  const double x[4] = {d, -d, d, -d};
  const double y[4] = {d, -d, -d, d};
  const double spin[4] = {1.0, 1.0, -1.0, -1.0};
  Mat4 M;
  for (int i = 0; i < 4; ++i) {
    M(0, i) = 1.0;
    M(1, i) = -y[i];
    M(2, i) = x[i];
    M(3, i) = k * spin[i];
  }
  return M;
}

Eigen::Vector4d allocate(const Mat4& inv, double T, double qx, double qy, double qz) {
  return inv * Eigen::Vector4d(T, qx, qy, qz);
}

// Largest s in [0, 1] keeping base + s * delta inside [lo, hi].
double headroom(const Eigen::Vector4d& base, const Eigen::Vector4d& delta, double lo, double hi) {
  double s = 1.0;
  for (int i = 0; i < 4; ++i) {
    if (delta(i) > 0.0) s = std::min(s, (hi - base(i)) / delta(i));
    else if (delta(i) < 0.0) s = std::min(s, (lo - base(i)) / delta(i));
  }
  return std::max(s, 0.0);
}

Vec12 pack(const TruthState& s) {
  Vec12 x;
  x << s.p, s.v_b, s.att.vec(), s.omega;
  return x;
}

TruthState unpack(const Vec12& x, bool on_ground) {
  TruthState s;
  s.p = x.segment<3>(0);
  s.v_b = x.segment<3>(3);
  s.att = EulerAngles::from(x.segment<3>(6));
  s.omega = x.segment<3>(9);
  s.on_ground = on_ground;
  return s;
}

Vec12 derivative(const Vec12& x, const Wrench& w, const Vec3& wind, const VehicleParams& prm) {
  const Vec3 v = x.segment<3>(3);
  const EulerAngles att = EulerAngles::from(x.segment<3>(6));
  const Vec3 omega = x.segment<3>(9);
  const Mat3 R = rotation_body_to_inertial(att);
  Mat3 S;
  try {
    S = euler_kinematics(att);
  } catch (const GimbalError& e) {
    throw SimFault(std::string("truth attitude: ") + e.what());
  }
  const Vec3 v_rel = v - R.transpose() * wind;
  const Vec3 J = prm.inertia;

  Vec12 dx;
  dx.segment<3>(0) = R * v;
  dx.segment<3>(3) = R.transpose() * Vec3(0, 0, kGravity) + Vec3(0, 0, -w.thrust / prm.mass) -
                     prm.drag.cwiseProduct(v_rel) + v.cross(omega);
  dx.segment<3>(6) = S * omega;
  dx.segment<3>(9) = (w.torque - omega.cross(J.cwiseProduct(omega))).cwiseQuotient(J);
  return dx;
}

}  // namespace

Wrench forward_wrench(const MotorThrusts& thrusts, const VehicleParams& params) {
  const Eigen::Vector4d w = allocation_matrix(params) * Eigen::Vector4d(thrusts[0], thrusts[1], thrusts[2], thrusts[3]);
  return {w(0), Vec3(w(1), w(2), w(3))};
}

MixResult mix(double thrust, double qx, double qy, double qz, const VehicleParams& params) {
  const Mat4 inv = allocation_matrix(params).inverse();
  const double hi = params.motor_max_thrust;
  MixResult out;

  const double T = std::clamp(thrust, 0.0, params.max_total_thrust());
  out.saturated = T != thrust;
  const Eigen::Vector4d base = allocate(inv, T, 0, 0, 0);
  const Eigen::Vector4d rp = allocate(inv, 0, qx, qy, 0);
  const Eigen::Vector4d yaw = allocate(inv, 0, 0, 0, qz);

  const double rp_scale = headroom(base, rp, 0.0, hi);
  const Eigen::Vector4d with_rp = base + rp_scale * rp;
  const double yaw_scale = headroom(with_rp, yaw, 0.0, hi);
  const Eigen::Vector4d motors = with_rp + yaw_scale * yaw;

  out.saturated = out.saturated || rp_scale < 1.0 || yaw_scale < 1.0;
  for (int i = 0; i < 4; ++i) out.thrusts[i] = std::clamp(motors(i), 0.0, hi);
  return out;
}

Vec3 specific_force(const TruthState& s, const MotorThrusts& thrusts, const Vec3& wind, const VehicleParams& params) {
  const Mat3 R = rotation_body_to_inertial(s.att);
  if (s.on_ground) return R.transpose() * Vec3(0, 0, -kGravity);
  const Wrench w = forward_wrench(thrusts, params);
  const Vec3 v_rel = s.v_b - R.transpose() * wind;
  return Vec3(0, 0, -w.thrust / params.mass) - params.drag.cwiseProduct(v_rel);
}

TruthState step_dynamics(const TruthState& s, const MotorThrusts& thrusts, const Vec3& wind,
                         const VehicleParams& params, double dt) {
  if (!(dt > 0.0)) throw SimFault("dt must be positive");
  const Wrench w = forward_wrench(thrusts, params);
  const Vec12 x0 = pack(s);
  const Vec12 k1 = derivative(x0, w, wind, params);
  const Vec12 k2 = derivative(x0 + k1 * (dt / 2), w, wind, params);
  const Vec12 k3 = derivative(x0 + k2 * (dt / 2), w, wind, params);
  const Vec12 k4 = derivative(x0 + k3 * dt, w, wind, params);
  const Vec12 x1 = x0 + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0);
  if (!x1.allFinite()) throw SimFault("non-finite truth state");

  TruthState next = unpack(x1, false);
  next.att.yaw = wrap_angle(next.att.yaw);
  next.att.roll = wrap_angle(next.att.roll);
  if (params.ground && next.p.z() >= 0.0) {
    const Vec3 v_i = rotation_body_to_inertial(next.att) * next.v_b;
    next.p.z() = 0.0;
    if (v_i.z() >= 0.0) {
      next.v_b.setZero();
      next.omega.setZero();
      next.att.roll = 0.0;
      next.att.pitch = 0.0;
      next.on_ground = true;
    }
  }
  return next;
}

}  // namespace rotor::sim
