#pragma once

#include "rotor/controller/cascade.hpp"
#include "rotor/estimator/ekf.hpp"
#include "rotor/navigation/follower.hpp"
#include "rotor/navigation/path_manager.hpp"
#include "rotor/runtime/node.hpp"
#include "rotor/runtime/scheduler.hpp"
#include "rotor/sim/firmware.hpp"
#include "rotor/sim/sensors.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotor::app {

/// Carries every problem found in a file, one "path:line:col: message" per entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class OriginMode { kFirstFix, kHome };

struct EstimatorSettings {
  est::EkfConfig ekf;
  OriginMode origin = OriginMode::kFirstFix;
};

struct NavigationSettings {
  nav::ManagerConfig manager;
  nav::FollowerGains follower;
};

struct StackConfig {
  std::uint64_t seed = 1;
  std::optional<double> duration;  // unset = derived from the mission
  double base_rate = 1000.0;
  double takeoff_allowance = 15.0;  // s
  double settle_time = 8.0;         // s
  double arrival_radius = 0.5;      // m

  std::vector<rt::NodeDescriptor> nodes;

  sim::VehicleParams vehicle;
  Vec3 wind = Vec3::Zero();
  sim::SensorConfig sensors;
  double truth_rate = 250.0;
  sim::FirmwareGains firmware;

  EstimatorSettings estimator;
  NavigationSettings navigation;
  ctrl::GainSet controller;

  std::vector<rt::ParamUpdate> param_updates;
};

struct MissionSpec {
  std::vector<nav::Waypoint> waypoints;
  double v_max = 0.0;
};

/// Defaults matching config/default.yaml.
StackConfig default_config();

/// Parses and validates. Throws ConfigError listing every problem.
StackConfig load_config(const std::filesystem::path& path);
StackConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// LLA entries are converted with gnss_to_local about `home`.
MissionSpec load_mission(const std::filesystem::path& path, const sim::HomeLocation& home);
MissionSpec parse_mission(const std::string& text, const sim::HomeLocation& home, const std::string& source = "<mission>");

/// Physical sanity across config and mission (hover margin, gimbal-safe
/// geometry, speed limits). Returns problems; empty when fine.
std::vector<std::string> sanity_check(const StackConfig& cfg, const MissionSpec* mission);

/// Simulated time for a mission run when no duration is configured.
double auto_duration(const StackConfig& cfg, const MissionSpec& mission);

std::string read_file(const std::filesystem::path& path);

}  // namespace rotor::app
