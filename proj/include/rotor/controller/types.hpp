#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rotor::ctrl {

/// Entry points of the cascade.
enum class Mode : int {
  kNedPosYaw = 0,             // n, e, d, yaw
  kNeVelDPosYawRate = 1,      // v_n, v_e, d, r
  kFrdAccelYawRate = 2,       // a_x, a_y, a_z (vehicle-1), r
  kNedVelYawRate = 3,         // v_n, v_e, v_d, r
  kNePosDVelYaw = 4,          // n, e, v_d, yaw
  kRollPitchYawThrottle = 5,  // phi, theta, psi, throttle
  kRollPitchRateThrottle = 6, // phi, theta, r, throttle
  kRatesThrottle = 7,         // p, q, r, throttle
  kPassThrough = 8,           // T_z, Q_x, Q_y, Q_z
  kRollPitchYawThrust = 9,    // phi, theta, psi, thrust (N)
  kRollPitchRateThrust = 10,  // phi, theta, r, thrust (N)
  kRatesThrust = 11,          // p, q, r, thrust (N)
};

inline constexpr int kModeCount = 12;

struct ControlCommand {
  double stamp = 0.0;
  int mode = 0;
  std::array<double, 4> values{};
};

enum class FirmwareKind : int { kAngle = 0, kRate = 1, kPassThrough = 2 };

/// 10-slot firmware vector. Slots 0, 1 and 6..9 are always zero; slots 2..5
/// hold (throttle, phi, theta, r), (throttle, p, q, r) or (T_z, Q_x, Q_y, Q_z).
struct FirmwareCommand {
  double stamp = 0.0;
  FirmwareKind kind = FirmwareKind::kAngle;
  std::array<double, 10> u{};

  static FirmwareCommand angle(double throttle, double roll, double pitch, double yaw_rate);
  static FirmwareCommand rate(double throttle, double p, double q, double r);
  static FirmwareCommand pass_through(double thrust, double qx, double qy, double qz);
};

inline FirmwareCommand FirmwareCommand::angle(double throttle, double roll, double pitch, double yaw_rate) {
  FirmwareCommand c;
  c.kind = FirmwareKind::kAngle;
  c.u = {0, 0, throttle, roll, pitch, yaw_rate, 0, 0, 0, 0};
  return c;
}
inline FirmwareCommand FirmwareCommand::rate(double throttle, double p, double q, double r) {
  FirmwareCommand c;
  c.kind = FirmwareKind::kRate;
  c.u = {0, 0, throttle, p, q, r, 0, 0, 0, 0};
  return c;
}
inline FirmwareCommand FirmwareCommand::pass_through(double thrust, double qx, double qy, double qz) {
  FirmwareCommand c;
  c.kind = FirmwareKind::kPassThrough;
  c.u = {0, 0, thrust, qx, qy, qz, 0, 0, 0, 0};
  return c;
}

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double out_limit = std::numeric_limits<double>::infinity();  // |output| clamp
  double i_limit = std::numeric_limits<double>::infinity();    // |integral of error| clamp
};

/// PID with derivative on measurement and a clamped integrator.
class Pid {
 public:
  Pid() = default;
  explicit Pid(PidGains g) : gains_(g) {}

  /// error = setpoint - measurement (caller may wrap angles first).
  double update(double error, double measurement, double dt);
  /// Same as update() but with a known measurement rate for the D term.
  double update_with_rate(double error, double measurement_rate, double dt);
  void reset();

  const PidGains& gains() const { return gains_; }
  PidGains& gains() { return gains_; }
  double integral() const { return integral_; }

 private:
  double finish(double error, double derivative, double dt);

  PidGains gains_;
  double integral_ = 0.0;
  double last_measurement_ = 0.0;
  bool has_last_ = false;
};

}  // namespace rotor::ctrl
