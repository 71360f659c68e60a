#pragma once

#include "rotor/controller/types.hpp"
#include "rotor/estimator/types.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rotor::ctrl {

class ControllerError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// What the cascade sees of the estimator output.
struct EstimateView {
  double stamp = 0.0;
  est::StateVector x;
  Vec3 rates = Vec3::Zero();  // body rates, gyro minus bias
};

struct GainSet {
  double mass = 2.0;         // kg, controller's model of the vehicle
  double max_thrust = 60.0;  // N, total thrust at full throttle
  double tilt_limit = deg2rad(30.0);
  double stale_timeout = 0.1;           // s
  double failsafe_throttle_scale = 0.9; // fraction of hover throttle

  // Position loops (P) -> velocity setpoints; out_limit is the speed cap.
  PidGains pos_n{1.0, 0.0, 0.0, 3.0};
  PidGains pos_e{1.0, 0.0, 0.0, 3.0};
  PidGains pos_d{1.0, 0.0, 0.0, 2.0};
  // Velocity loops -> NED accelerations; out_limit is the acceleration cap.
  PidGains vel_n{2.0, 0.3, 0.0, 5.0, 2.0};
  PidGains vel_e{2.0, 0.3, 0.0, 5.0, 2.0};
  PidGains vel_d{3.0, 0.5, 0.0, 5.0, 2.0};
  // Heading (P) -> yaw rate.
  PidGains yaw{1.5, 0.0, 0.0, deg2rad(90.0)};
  // Attitude loops -> body rates.
  PidGains roll{6.0, 0.0, 0.0, deg2rad(220.0)};
  PidGains pitch{6.0, 0.0, 0.0, deg2rad(220.0)};
  // Rate loops -> torques (N m).
  PidGains roll_rate{0.5, 0.1, 0.0, 3.0, 0.5};
  PidGains pitch_rate{0.5, 0.1, 0.0, 3.0, 0.5};
  PidGains yaw_rate{0.6, 0.1, 0.0, 0.8, 0.5};

  /// Sets a gain by dotted name, e.g. "vel_n.kp" or "mass". Returns false
  /// for unknown names.
  bool set(const std::string& key, double value);
  /// All settable names.
  static std::vector<std::string> keys();
};

struct AngleSetpoint {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw_rate = 0.0;
  double throttle = 0.0;
  bool saturated = false;  // tilt limit hit or non-positive vertical force
};

/// Vehicle-1 accelerations to roll/pitch/throttle.
AngleSetpoint accel_to_attitude(const Vec3& accel_v1, double yaw_rate, double roll_est, double pitch_est,
                                const GainSet& gains);

/// clamp(T / T_max, 0, 1).
double thrust_to_throttle(double thrust, const GainSet& gains);

/// The hop sequence of entry points visited before the firmware command,
/// per the routing table. Throws ControllerError for an unknown mode.
std::vector<int> route_path(int mode);
FirmwareKind terminal_kind(int mode);

/// One stateful cascade instance. Integrators persist between calls.
class Cascade {
 public:
  explicit Cascade(GainSet gains = {});

  /// Produces a firmware command. A stale estimate (age > stale_timeout)
  /// yields the failsafe command. Throws ControllerError for unknown modes.
  FirmwareCommand route(const ControlCommand& cmd, const EstimateView& est, double now, double dt);

  FirmwareCommand failsafe(double now) const;

  /// Attitude loop: angle errors -> body rate setpoints (p, q).
  std::pair<double, double> attitude_loop(double roll_d, double pitch_d, const EstimateView& est, double dt);
  /// Rate loop: body rate errors -> torques.
  Vec3 rate_loop(double p_d, double q_d, double r_d, const Vec3& rates, double dt);

  const GainSet& gains() const { return gains_; }
  bool set_gain(const std::string& key, double value);
  void reset();

  /// Entry points visited by the most recent route() call.
  const std::vector<int>& last_path() const { return last_path_; }
  bool last_failsafe() const { return last_failsafe_; }
  bool last_saturated() const { return last_saturated_; }

 private:
  void sync_gains();
  double yaw_to_rate(double yaw_d, const EstimateView& est, double dt);
  Vec3 position_to_velocity(const Vec3& p_d, const Vec3& mask, const EstimateView& est, double dt);
  Vec3 velocity_to_accel_v1(const Vec3& v_d, const EstimateView& est, double dt);

  GainSet gains_;
  Pid pos_n_, pos_e_, pos_d_;
  Pid vel_n_, vel_e_, vel_d_;
  Pid yaw_;
  Pid roll_, pitch_;
  Pid roll_rate_, pitch_rate_, yaw_rate_;
  std::vector<int> last_path_;
  bool last_failsafe_ = false;
  bool last_saturated_ = false;
};

}  // namespace rotor::ctrl
