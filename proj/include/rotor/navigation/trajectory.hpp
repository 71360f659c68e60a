#pragma once

#include "rotor/math.hpp"

#include <vector>

namespace rotor::nav {

struct Waypoint {
  Vec3 p = Vec3::Zero();  // NED, m
  double heading = 0.0;   // rad, (-pi, pi]
};

struct TrajectorySetpoint {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  double yaw = 0.0;
  double yaw_rate = 0.0;
  double yaw_accel = 0.0;
};

struct WaypointLeg {
  Waypoint start;
  Waypoint end;
  double duration = 0.0;  // T_path, s
};

inline constexpr double kDefaultMinLegTime = 2.0;

/// T_path = max(|dp| * 1.875 / v_max, t_min): the smoothstep's peak slope
/// keeps the leg's peak speed at or below v_max.
double leg_duration(const Waypoint& from, const Waypoint& to, double v_max, double t_min = kDefaultMinLegTime);

WaypointLeg make_leg(const Waypoint& from, const Waypoint& to, double v_max, double t_min = kDefaultMinLegTime);

/// Straight-line position and shortest-way heading interpolation at leg time t.
TrajectorySetpoint sample_trajectory(const WaypointLeg& leg, double t);

/// Constant setpoint at a waypoint.
TrajectorySetpoint hold_at(const Waypoint& w);

}  // namespace rotor::nav
