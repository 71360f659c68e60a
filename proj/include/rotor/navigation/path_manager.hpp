#pragma once

#include "rotor/estimator/types.hpp"
#include "rotor/navigation/trajectory.hpp"

#include <optional>
#include <vector>

namespace rotor::nav {

enum class Phase : int { kTakeoff = 0, kLeg = 1, kHold = 2 };

struct ManagerConfig {
  double t_min = kDefaultMinLegTime;
  bool takeoff = true;
  double takeoff_altitude = 5.0;   // m above the origin
  double takeoff_tolerance = 0.3;  // m
  double takeoff_speed_tolerance = 0.3;
};

struct ManagerOutput {
  TrajectorySetpoint sp;
  Phase phase = Phase::kHold;
  int leg = -1;  // -1 during takeoff
  Waypoint leg_start;
  Waypoint leg_end;
};

/// Generates smoothstep straight-line legs between consecutive waypoints.
/// With takeoff enabled a hover waypoint above the origin is prepended and the
/// first leg starts once the estimate settles there.
class PathManager {
 public:
  explicit PathManager(ManagerConfig cfg = {});

  void set_mission(const std::vector<Waypoint>& waypoints, double v_max);

  /// Emits the setpoint for the current time, then advances by dt.
  ManagerOutput step(const std::optional<est::StateVector>& estimate, double dt);

  const std::vector<WaypointLeg>& legs() const { return legs_; }
  double total_leg_time() const;
  Phase phase() const { return phase_; }
  int leg_index() const { return leg_; }
  bool has_mission() const { return !waypoints_.empty(); }
  const Waypoint& takeoff_waypoint() const { return takeoff_; }

 private:
  ManagerOutput hold_output(const Waypoint& w, Phase phase) const;

  ManagerConfig cfg_;
  std::vector<Waypoint> waypoints_;
  std::vector<WaypointLeg> legs_;
  Waypoint takeoff_;
  Phase phase_ = Phase::kHold;
  int leg_ = 0;
  double t_ = 0.0;
};

}  // namespace rotor::nav
