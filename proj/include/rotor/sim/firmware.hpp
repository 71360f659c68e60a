#pragma once

#include "rotor/controller/types.hpp"
#include "rotor/sim/vehicle.hpp"

namespace rotor::sim {

/// Inner-loop gains of the emulated flight controller.
struct FirmwareGains {
  ctrl::PidGains roll{6.0, 0.0, 0.0, deg2rad(220.0)};
  ctrl::PidGains pitch{6.0, 0.0, 0.0, deg2rad(220.0)};
  ctrl::PidGains roll_rate{0.5, 0.1, 0.0, 3.0, 0.5};
  ctrl::PidGains pitch_rate{0.5, 0.1, 0.0, 3.0, 0.5};
  ctrl::PidGains yaw_rate{0.6, 0.1, 0.0, 0.8, 0.5};
};

/// Stand-in for the flight controller's angle and rate loops and mixer.
/// Uses truth attitude and rates in place of the board's own sensors.
class FirmwareEmulator {
 public:
  FirmwareEmulator(FirmwareGains gains, VehicleParams params);

  MixResult step(const ctrl::FirmwareCommand& cmd, const TruthState& truth, double dt);
  void reset();

  const FirmwareGains& gains() const { return gains_; }

 private:
  Vec3 rate_torques(const Vec3& rates_d, const Vec3& rates, double dt);

  FirmwareGains gains_;
  VehicleParams params_;
  ctrl::Pid roll_, pitch_, roll_rate_, pitch_rate_, yaw_rate_;
};

}  // namespace rotor::sim
