#include "rotor/app/nodes.hpp"

#include <algorithm>
#include <cmath>

namespace rotor::app {

namespace tp = rt::topics;

SimRole::SimRole(rt::Bus& bus)
    : motors_in_(bus.subscribe<rt::MotorMsg>(tp::kMotors)),
      imu_out_(bus.topic<rt::ImuMsg>(tp::kImu)),
      baro_out_(bus.topic<rt::BaroMsg>(tp::kBaro)),
      mag_out_(bus.topic<rt::MagMsg>(tp::kMag)),
      gnss_out_(bus.topic<rt::GnssMsg>(tp::kGnss)),
      truth_out_(bus.topic<rt::TruthMsg>(tp::kTruth)),
      state_out_(bus.topic<rt::TruthMsg>(tp::kSimState, false)) {}

EstimatorRole::EstimatorRole(rt::Bus& bus)
    : imu_in_(bus.subscribe<rt::ImuMsg>(tp::kImu)),
      baro_in_(bus.subscribe<rt::BaroMsg>(tp::kBaro)),
      mag_in_(bus.subscribe<rt::MagMsg>(tp::kMag)),
      gnss_in_(bus.subscribe<rt::GnssMsg>(tp::kGnss)),
      estimate_out_(bus.topic<rt::EstimateMsg>(tp::kEstimate)) {}

PlannerRole::PlannerRole(rt::Bus& bus) : mission_out_(bus.topic<rt::MissionMsg>(tp::kMission, false)) {}

ManagerRole::ManagerRole(rt::Bus& bus)
    : mission_in_(bus.subscribe<rt::MissionMsg>(tp::kMission)),
      estimate_in_(bus.subscribe<rt::EstimateMsg>(tp::kEstimate)),
      setpoint_out_(bus.topic<rt::SetpointMsg>(tp::kSetpoint)) {}

FollowerRole::FollowerRole(rt::Bus& bus)
    : setpoint_in_(bus.subscribe<rt::SetpointMsg>(tp::kSetpoint)),
      estimate_in_(bus.subscribe<rt::EstimateMsg>(tp::kEstimate)),
      command_out_(bus.topic<rt::ControlMsg>(tp::kControl)) {}

ControllerRole::ControllerRole(rt::Bus& bus)
    : command_in_(bus.subscribe<rt::ControlMsg>(tp::kControl)),
      estimate_in_(bus.subscribe<rt::EstimateMsg>(tp::kEstimate)),
      firmware_out_(bus.topic<rt::FirmwareMsg>(tp::kFirmware)) {}

FirmwareRole::FirmwareRole(rt::Bus& bus)
    : command_in_(bus.subscribe<rt::FirmwareMsg>(tp::kFirmware)),
      state_in_(bus.subscribe<rt::TruthMsg>(tp::kSimState)),
      motors_out_(bus.topic<rt::MotorMsg>(tp::kMotors)) {}

// ---------------------------------------------------------------------------

rt::EstimateMsg make_estimate(const est::Ekf& ekf, double stamp) {
  rt::EstimateMsg m;
  m.stamp = stamp;
  m.x = ekf.belief().x;
  m.rates = ekf.body_rates();
  m.P_diag = ekf.belief().P.diagonal();
  return m;
}

std::vector<rt::EstimateMsg> EstimatorCore::process(std::vector<est::SensorEvent> events) {
  std::stable_sort(events.begin(), events.end(), [](const est::SensorEvent& a, const est::SensorEvent& b) {
    const double sa = est::event_stamp(a), sb = est::event_stamp(b);
    if (sa != sb) return sa < sb;
    return est::event_priority(a) < est::event_priority(b);
  });
  std::vector<rt::EstimateMsg> out;
  std::size_t i = 0;
  while (i < events.size()) {
    const double stamp = est::event_stamp(events[i]);
    bool imu = false;
    for (; i < events.size() && est::event_stamp(events[i]) == stamp; ++i) imu = ekf_.process(events[i]) || imu;
    if (imu && !ekf_.faulted()) out.push_back(make_estimate(ekf_, stamp));
  }
  return out;
}

bool EstimatorCore::set_param(const std::string& key, double value) {
  est::EkfConfig cfg = ekf_.config();
  if (key == "gate_baro") cfg.gate_baro = value;
  else if (key == "gate_mag") cfg.gate_mag = value;
  else if (key == "gate_gnss") cfg.gate_gnss = value;
  else if (key == "baro_sigma") cfg.noise.R_baro = value * value;
  else if (key == "mag_sigma") cfg.noise.R_mag = Mat3::Identity() * value * value;
  else if (key == "gnss_position_sigma") cfg.noise.R_gnss(0, 0) = cfg.noise.R_gnss(1, 1) = value * value;
  else if (key == "gnss_velocity_sigma") {
    for (int i = 2; i < 5; ++i) cfg.noise.R_gnss(i, i) = value * value;
  } else return false;
  ekf_.set_config(cfg);
  return true;
}

// ---------------------------------------------------------------------------

RigidBodySimNode::RigidBodySimNode(rt::Bus& bus, const StackConfig& cfg, double rate)
    : SimRole(bus),
      params_(cfg.vehicle),
      wind_(cfg.wind),
      sensors_([&] {
        sim::SensorConfig s = cfg.sensors;
        s.seed = cfg.seed;
        return s;
      }(), rate),
      truth_gate_(cfg.truth_rate, rate) {}

bool RigidBodySimNode::set_param(const std::string& key, double value) {
  if (key == "wind_n") wind_.x() = value;
  else if (key == "wind_e") wind_.y() = value;
  else if (key == "wind_d") wind_.z() = value;
  else return false;
  return true;
}

void RigidBodySimNode::tick(const rt::TickContext& ctx) {
  const auto& motors = motors_in_.latest();
  const sim::MotorThrusts cmd = motors ? motors->thrust : sim::MotorThrusts{};
  if (steps_ > 0) {
    if (params_.motor_time_constant > 0.0) {
      const double a = 1.0 - std::exp(-ctx.dt / params_.motor_time_constant);
      for (int i = 0; i < 4; ++i) applied_[i] += a * (cmd[i] - applied_[i]);
    } else {
      applied_ = cmd;
    }
    try {
      truth_ = sim::step_dynamics(truth_, applied_, wind_, params_, ctx.dt);
    } catch (const sim::SimFault& e) {
      throw rt::NodeFault(std::string("sim: ") + e.what());
    }
  }
  const Vec3 f = sim::specific_force(truth_, applied_, wind_, params_);
  const sim::SensorSample s = sensors_.sample(steps_, ctx.t, truth_, f);

  rt::TruthMsg t{ctx.t, truth_.p, truth_.v_b, truth_.att, truth_.omega,
                 rotation_body_to_inertial(truth_.att) * truth_.v_b, truth_.on_ground};
  state_out_.publish(t);
  if (truth_gate_.due(steps_)) truth_out_.publish(t);
  if (s.imu) imu_out_.publish(*s.imu);
  if (s.baro) baro_out_.publish(*s.baro);
  if (s.mag) mag_out_.publish(*s.mag);
  if (s.gnss) gnss_out_.publish(*s.gnss);
  ++steps_;
}

EkfNode::EkfNode(rt::Bus& bus, const est::EkfConfig& cfg) : EstimatorRole(bus), core_(cfg) {}

void EkfNode::tick(const rt::TickContext&) {
  std::vector<est::SensorEvent> events;
  for (auto& m : imu_in_.drain()) events.emplace_back(m);
  for (auto& m : baro_in_.drain()) events.emplace_back(m);
  for (auto& m : mag_in_.drain()) events.emplace_back(m);
  for (auto& m : gnss_in_.drain()) events.emplace_back(m);
  if (events.empty()) return;
  for (const auto& e : core_.process(std::move(events))) estimate_out_.publish(e);
  if (core_.ekf().faulted()) throw rt::NodeFault("estimator: non-finite state or covariance");
}

WaypointPlannerNode::WaypointPlannerNode(rt::Bus& bus, MissionSpec mission)
    : PlannerRole(bus), mission_(std::move(mission)) {}

void WaypointPlannerNode::tick(const rt::TickContext& ctx) {
  if (sent_) return;
  mission_out_.publish({ctx.t, mission_.waypoints, mission_.v_max});
  sent_ = true;
}

SmoothstepManagerNode::SmoothstepManagerNode(rt::Bus& bus, const nav::ManagerConfig& cfg)
    : ManagerRole(bus), manager_(cfg) {}

void SmoothstepManagerNode::tick(const rt::TickContext& ctx) {
  for (const auto& m : mission_in_.drain()) {
    try {
      manager_.set_mission(m.waypoints, m.v_max);
    } catch (const std::exception& e) {
      throw rt::NodeFault(std::string("manager: ") + e.what());
    }
  }
  if (!manager_.has_mission()) return;
  const auto& est = estimate_in_.latest();
  std::optional<est::StateVector> x;
  if (est) x = est->x;
  const nav::ManagerOutput out = manager_.step(x, ctx.dt);
  setpoint_out_.publish({ctx.t, out.sp, static_cast<int>(out.phase), out.leg, out.leg_start, out.leg_end});
}

FlatnessFollowerNode::FlatnessFollowerNode(rt::Bus& bus, const nav::FollowerGains& gains, double mass)
    : FollowerRole(bus), follower_(gains, mass) {}

bool FlatnessFollowerNode::set_param(const std::string& key, double value) {
  nav::FollowerGains& g = follower_.gains();
  const std::string axes = "ned";
  for (int i = 0; i < 3; ++i) {
    const std::string suffix = std::string("_") + axes[i];
    if (key == "kp" + suffix) return g.kp(i) = value, true;
    if (key == "kd" + suffix) return g.kd(i) = value, true;
    if (key == "ki" + suffix) return g.ki(i) = value, true;
  }
  if (key == "k_yaw") return g.k_yaw = value, true;
  if (key == "i_limit") return g.i_limit = value, true;
  return false;
}

void FlatnessFollowerNode::tick(const rt::TickContext& ctx) {
  const auto& sp = setpoint_in_.latest();
  const auto& est = estimate_in_.latest();
  if (!sp || !est) return;
  nav::ManagerOutput m;
  m.sp = sp->sp;
  m.phase = static_cast<nav::Phase>(sp->phase);
  m.leg = sp->leg;
  m.leg_start = sp->leg_start;
  m.leg_end = sp->leg_end;
  command_out_.publish(follower_.command(m, est->x, ctx.dt, ctx.t));
}

CascadeControllerNode::CascadeControllerNode(rt::Bus& bus, const ctrl::GainSet& gains)
    : ControllerRole(bus), cascade_(gains) {}

void CascadeControllerNode::tick(const rt::TickContext& ctx) {
  const auto& cmd = command_in_.latest();
  const auto& est = estimate_in_.latest();
  if (!cmd || !est) return;
  try {
    firmware_out_.publish(cascade_.route(*cmd, {est->stamp, est->x, est->rates}, ctx.t, ctx.dt));
  } catch (const ctrl::ControllerError& e) {
    throw rt::NodeFault(std::string("controller: ") + e.what());
  }
}

EmulatedFirmwareNode::EmulatedFirmwareNode(rt::Bus& bus, const sim::FirmwareGains& gains,
                                           const sim::VehicleParams& params)
    : FirmwareRole(bus), firmware_(gains, params) {}

void EmulatedFirmwareNode::tick(const rt::TickContext& ctx) {
  const auto& cmd = command_in_.latest();
  const auto& state = state_in_.latest();
  if (!state) return;
  rt::MotorMsg out;
  out.stamp = ctx.t;
  if (cmd) {
    sim::TruthState s;
    s.p = state->p;
    s.v_b = state->v_b;
    s.att = state->att;
    s.omega = state->omega;
    s.on_ground = state->on_ground;
    const sim::MixResult m = firmware_.step(*cmd, s, ctx.dt);
    out.thrust = m.thrusts;
    out.saturated = m.saturated;
  }
  motors_out_.publish(out);
}

// ---------------------------------------------------------------------------

void provide_defaults(rt::Registry& registry, const StackConfig& cfg, const MissionSpec& mission,
                      const std::optional<rt::LoggerOptions>& logger) {
  registry.provide("sim", "rigid_body", [cfg](rt::Bus& bus, const rt::NodeDescriptor& d) {
    return std::make_unique<RigidBodySimNode>(bus, cfg, d.rate);
  });
  registry.provide("estimator", "ekf", [cfg](rt::Bus& bus, const rt::NodeDescriptor&) {
    return std::make_unique<EkfNode>(bus, cfg.estimator.ekf);
  });
  registry.provide("planner", "waypoint_list", [mission](rt::Bus& bus, const rt::NodeDescriptor&) {
    return std::make_unique<WaypointPlannerNode>(bus, mission);
  });
  registry.provide("manager", "smoothstep", [cfg](rt::Bus& bus, const rt::NodeDescriptor&) {
    return std::make_unique<SmoothstepManagerNode>(bus, cfg.navigation.manager);
  });
  registry.provide("follower", "flatness_pid", [cfg](rt::Bus& bus, const rt::NodeDescriptor&) {
    return std::make_unique<FlatnessFollowerNode>(bus, cfg.navigation.follower, cfg.controller.mass);
  });
  registry.provide("controller", "cascade", [cfg](rt::Bus& bus, const rt::NodeDescriptor&) {
    return std::make_unique<CascadeControllerNode>(bus, cfg.controller);
  });
  registry.provide("firmware", "emulated", [cfg](rt::Bus& bus, const rt::NodeDescriptor&) {
    return std::make_unique<EmulatedFirmwareNode>(bus, cfg.firmware, cfg.vehicle);
  });
  if (logger) {
    registry.provide("logger", "csv", [opt = *logger](rt::Bus&, const rt::NodeDescriptor&) {
      return std::make_unique<rt::LoggerNode>(opt);
    });
  }
}

void bind_nodes(rt::Registry& registry, const StackConfig& cfg, const std::vector<std::string>& skip) {
  for (const auto& d : cfg.nodes) {
    if (std::find(skip.begin(), skip.end(), d.role) != skip.end()) continue;
    registry.bind(d);
  }
}

}  // namespace rotor::app
