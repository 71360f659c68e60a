#include "rotor/sim/firmware.hpp"

#include <algorithm>

namespace rotor::sim {

FirmwareEmulator::FirmwareEmulator(FirmwareGains gains, VehicleParams params)
    : gains_(gains),
      params_(params),
      roll_(gains.roll),
      pitch_(gains.pitch),
      roll_rate_(gains.roll_rate),
      pitch_rate_(gains.pitch_rate),
      yaw_rate_(gains.yaw_rate) {}

void FirmwareEmulator::reset() {
  for (ctrl::Pid* p : {&roll_, &pitch_, &roll_rate_, &pitch_rate_, &yaw_rate_}) p->reset();
}

Vec3 FirmwareEmulator::rate_torques(const Vec3& rates_d, const Vec3& rates, double dt) {
  return {roll_rate_.update(rates_d.x() - rates.x(), rates.x(), dt),
          pitch_rate_.update(rates_d.y() - rates.y(), rates.y(), dt),
          yaw_rate_.update(rates_d.z() - rates.z(), rates.z(), dt)};
}

MixResult FirmwareEmulator::step(const ctrl::FirmwareCommand& cmd, const TruthState& truth, double dt) {
  const auto& u = cmd.u;
  const double thrust = std::clamp(u[2], 0.0, 1.0) * params_.max_total_thrust();
  switch (cmd.kind) {
    case ctrl::FirmwareKind::kAngle: {
      const double p = roll_.update_with_rate(wrap_angle(u[3] - truth.att.roll), truth.omega.x(), dt);
      const double q = pitch_.update_with_rate(wrap_angle(u[4] - truth.att.pitch), truth.omega.y(), dt);
      const Vec3 tau = rate_torques({p, q, u[5]}, truth.omega, dt);
      return mix(thrust, tau.x(), tau.y(), tau.z(), params_);
    }
    case ctrl::FirmwareKind::kRate: {
      const Vec3 tau = rate_torques({u[3], u[4], u[5]}, truth.omega, dt);
      return mix(thrust, tau.x(), tau.y(), tau.z(), params_);
    }
    case ctrl::FirmwareKind::kPassThrough:
      break;
  }
  return mix(u[2], u[3], u[4], u[5], params_);
}

}  // namespace rotor::sim
