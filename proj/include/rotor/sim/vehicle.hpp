#pragma once

#include "rotor/math.hpp"

#include <array>
#include <stdexcept>

namespace rotor::sim {

class SimFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TruthState {
  Vec3 p = Vec3::Zero();      // NED, m
  Vec3 v_b = Vec3::Zero();    // body, m/s
  EulerAngles att;
  Vec3 omega = Vec3::Zero();  // body rates, rad/s
  bool on_ground = false;
};

/// X-quad parameters. Defaults approximate a HolyBro x650 class frame.
struct VehicleParams {
  double mass = 2.0;
  Vec3 inertia{0.035, 0.035, 0.06};  // diagonal, kg m^2
  double arm_length = 0.325;
  double motor_max_thrust = 15.0;    // N per motor
  double torque_coeff = 0.016;       // yaw torque per newton of thrust, m
  Vec3 drag{0.1, 0.1, 0.2};          // linear drag, 1/s
  double motor_time_constant = 0.0;  // s, 0 = instantaneous
  bool ground = true;

  double max_total_thrust() const { return 4.0 * motor_max_thrust; }
};

using MotorThrusts = std::array<double, 4>;

/// Total thrust and body torques produced by a motor set.
struct Wrench {
  double thrust = 0.0;
  Vec3 torque = Vec3::Zero();
};

/// Motor order: front-right, back-left, front-left, back-right.
Wrench forward_wrench(const MotorThrusts& thrusts, const VehicleParams& params);

struct MixResult {
  MotorThrusts thrusts{};
  bool saturated = false;
};

/// Wrench allocation with clamping to [0, motor max]. When the request is
/// infeasible, yaw torque is reduced first, then roll/pitch torque, then
/// thrust is clamped.
MixResult mix(double thrust, double qx, double qy, double qz, const VehicleParams& params);

/// Specific force (non-gravitational acceleration) in the body frame.
Vec3 specific_force(const TruthState& s, const MotorThrusts& thrusts, const Vec3& wind, const VehicleParams& params);

/// One RK4 step of the rigid-body model, then the ground constraint.
/// Throws SimFault on gimbal proximity or non-finite state.
TruthState step_dynamics(const TruthState& s, const MotorThrusts& thrusts, const Vec3& wind,
                         const VehicleParams& params, double dt);

}  // namespace rotor::sim
