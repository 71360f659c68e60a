#pragma once

#include "rotor/controller/types.hpp"
#include "rotor/estimator/types.hpp"
#include "rotor/navigation/path_manager.hpp"
#include "rotor/navigation/trajectory.hpp"

namespace rotor::nav {

struct FollowerGains {
  Vec3 kp{1.5, 1.5, 2.5};
  Vec3 kd{2.2, 2.2, 3.0};
  Vec3 ki{0.2, 0.2, 0.5};
  double i_limit = 2.0;  // m s, per axis
  double k_yaw = 1.5;
  double min_force = 1.0;             // m/s^2; below this the command is treated as free fall
  double min_thrust_fraction = 0.1;   // of m g, used on free-fall commands
  double takeoff_climb_rate = 1.0;    // m/s
  double takeoff_kp = 1.0;            // 1/s, altitude error to climb rate
};

/// Angle/thrust setpoint (phi, theta, r, T) for the cascade.
struct AngleThrustSetpoint {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw_rate = 0.0;
  double thrust = 0.0;  // N
  bool warning = false;
};

struct FlatAttitude {
  double roll = 0.0;
  double pitch = 0.0;
  double thrust = 0.0;  // N
  bool valid = false;
};

/// Differential-flatness attitude from a commanded NED acceleration and yaw:
/// body z is aligned with -(a - g e3), x is the yaw heading projected
/// orthogonally to it.
FlatAttitude flatness_attitude(const Vec3& accel_cmd, double yaw_ref, double mass, double min_force);

/// PID on position with acceleration, velocity and position feedforward.
class TrajectoryFollower {
 public:
  TrajectoryFollower(FollowerGains gains, double mass);

  AngleThrustSetpoint follow(const TrajectorySetpoint& sp, const est::StateVector& estimate, double dt);

  /// Takeoff phase -> mode 4 (n, e, v_d, yaw); otherwise mode 10 (phi, theta, r, T).
  ctrl::ControlCommand command(const ManagerOutput& m, const est::StateVector& estimate, double dt, double now);

  void reset_integral() { integral_.setZero(); }
  const Vec3& integral() const { return integral_; }
  const FollowerGains& gains() const { return gains_; }
  FollowerGains& gains() { return gains_; }

 private:
  FollowerGains gains_;
  double mass_;
  Vec3 integral_ = Vec3::Zero();
  AngleThrustSetpoint last_;
  int last_leg_ = -2;
};

}  // namespace rotor::nav
