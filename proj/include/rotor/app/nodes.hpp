#pragma once

#include "rotor/app/config.hpp"
#include "rotor/controller/cascade.hpp"
#include "rotor/estimator/ekf.hpp"
#include "rotor/navigation/follower.hpp"
#include "rotor/navigation/path_manager.hpp"
#include "rotor/runtime/log.hpp"
#include "rotor/runtime/registry.hpp"
#include "rotor/sim/firmware.hpp"
#include "rotor/sim/sensors.hpp"

namespace rotor::app {

// Role interfaces: each fixes the topics a role reads and writes, so any
// implementation deriving from it can be swapped in.

class SimRole : public rt::Node {
 protected:
  explicit SimRole(rt::Bus& bus);
  rt::Subscription<rt::MotorMsg> motors_in_;
  rt::Topic<rt::ImuMsg>& imu_out_;
  rt::Topic<rt::BaroMsg>& baro_out_;
  rt::Topic<rt::MagMsg>& mag_out_;
  rt::Topic<rt::GnssMsg>& gnss_out_;
  rt::Topic<rt::TruthMsg>& truth_out_;
  rt::Topic<rt::TruthMsg>& state_out_;  // every step, not logged
};

class EstimatorRole : public rt::Node {
 protected:
  explicit EstimatorRole(rt::Bus& bus);
  rt::Subscription<rt::ImuMsg> imu_in_;
  rt::Subscription<rt::BaroMsg> baro_in_;
  rt::Subscription<rt::MagMsg> mag_in_;
  rt::Subscription<rt::GnssMsg> gnss_in_;
  rt::Topic<rt::EstimateMsg>& estimate_out_;
};

class PlannerRole : public rt::Node {
 protected:
  explicit PlannerRole(rt::Bus& bus);
  rt::Topic<rt::MissionMsg>& mission_out_;
};

class ManagerRole : public rt::Node {
 protected:
  explicit ManagerRole(rt::Bus& bus);
  rt::Subscription<rt::MissionMsg> mission_in_;
  rt::Subscription<rt::EstimateMsg> estimate_in_;
  rt::Topic<rt::SetpointMsg>& setpoint_out_;
};

class FollowerRole : public rt::Node {
 protected:
  explicit FollowerRole(rt::Bus& bus);
  rt::Subscription<rt::SetpointMsg> setpoint_in_;
  rt::Subscription<rt::EstimateMsg> estimate_in_;
  rt::Topic<rt::ControlMsg>& command_out_;
};

class ControllerRole : public rt::Node {
 protected:
  explicit ControllerRole(rt::Bus& bus);
  rt::Subscription<rt::ControlMsg> command_in_;
  rt::Subscription<rt::EstimateMsg> estimate_in_;
  rt::Topic<rt::FirmwareMsg>& firmware_out_;
};

class FirmwareRole : public rt::Node {
 protected:
  explicit FirmwareRole(rt::Bus& bus);
  rt::Subscription<rt::FirmwareMsg> command_in_;
  rt::Subscription<rt::TruthMsg> state_in_;
  rt::Topic<rt::MotorMsg>& motors_out_;
};

/// Runs the EKF over sensor events in (stamp, sensor) order and emits one
/// estimate per stamp that carried an IMU sample. Shared by the live node
/// and log replay so both produce the same numbers.
class EstimatorCore {
 public:
  explicit EstimatorCore(est::EkfConfig cfg) : ekf_(std::move(cfg)) {}

  std::vector<rt::EstimateMsg> process(std::vector<est::SensorEvent> events);
  bool set_param(const std::string& key, double value);
  const est::Ekf& ekf() const { return ekf_; }

 private:
  est::Ekf ekf_;
};

rt::EstimateMsg make_estimate(const est::Ekf& ekf, double stamp);

class RigidBodySimNode : public SimRole {
 public:
  RigidBodySimNode(rt::Bus& bus, const StackConfig& cfg, double rate);
  void tick(const rt::TickContext& ctx) override;
  bool set_param(const std::string& key, double value) override;
  const sim::TruthState& truth() const { return truth_; }

 private:
  sim::VehicleParams params_;
  Vec3 wind_;
  sim::SensorSuite sensors_;
  RateGate truth_gate_;
  sim::TruthState truth_;
  sim::MotorThrusts applied_{};
  std::int64_t steps_ = 0;
};

class EkfNode : public EstimatorRole {
 public:
  EkfNode(rt::Bus& bus, const est::EkfConfig& cfg);
  void tick(const rt::TickContext& ctx) override;
  bool set_param(const std::string& key, double value) override { return core_.set_param(key, value); }

 private:
  EstimatorCore core_;
};

class WaypointPlannerNode : public PlannerRole {
 public:
  WaypointPlannerNode(rt::Bus& bus, MissionSpec mission);
  void tick(const rt::TickContext& ctx) override;

 private:
  MissionSpec mission_;
  bool sent_ = false;
};

class SmoothstepManagerNode : public ManagerRole {
 public:
  SmoothstepManagerNode(rt::Bus& bus, const nav::ManagerConfig& cfg);
  void tick(const rt::TickContext& ctx) override;

 private:
  nav::PathManager manager_;
};

class FlatnessFollowerNode : public FollowerRole {
 public:
  FlatnessFollowerNode(rt::Bus& bus, const nav::FollowerGains& gains, double mass);
  void tick(const rt::TickContext& ctx) override;
  bool set_param(const std::string& key, double value) override;

 private:
  nav::TrajectoryFollower follower_;
};

class CascadeControllerNode : public ControllerRole {
 public:
  CascadeControllerNode(rt::Bus& bus, const ctrl::GainSet& gains);
  void tick(const rt::TickContext& ctx) override;
  bool set_param(const std::string& key, double value) override { return cascade_.set_gain(key, value); }

 private:
  ctrl::Cascade cascade_;
};

class EmulatedFirmwareNode : public FirmwareRole {
 public:
  EmulatedFirmwareNode(rt::Bus& bus, const sim::FirmwareGains& gains, const sim::VehicleParams& params);
  void tick(const rt::TickContext& ctx) override;

 private:
  sim::FirmwareEmulator firmware_;
};

/// Registers the stock implementation of every role. With `logger` unset the
/// logger role has no implementation.
void provide_defaults(rt::Registry& registry, const StackConfig& cfg, const MissionSpec& mission,
                      const std::optional<rt::LoggerOptions>& logger);

/// Binds cfg.nodes, skipping any role listed in `skip`.
void bind_nodes(rt::Registry& registry, const StackConfig& cfg, const std::vector<std::string>& skip = {});

}  // namespace rotor::app
