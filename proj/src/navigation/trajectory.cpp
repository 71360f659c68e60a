#include "rotor/navigation/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace rotor::nav {

double leg_duration(const Waypoint& from, const Waypoint& to, double v_max, double t_min) {
  if (!(v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
  return std::max((to.p - from.p).norm() * kSmoothstepPeakSlope / v_max, t_min);
}

WaypointLeg make_leg(const Waypoint& from, const Waypoint& to, double v_max, double t_min) {
  return {from, to, leg_duration(from, to, v_max, t_min)};
}

TrajectorySetpoint sample_trajectory(const WaypointLeg& leg, double t) {
  const double T = leg.duration;
  const Smoothstep s = quintic_smoothstep(std::clamp(t / T, 0.0, 1.0));
  const Vec3 dp = leg.end.p - leg.start.p;
  const double dpsi = wrap_angle(leg.end.heading - leg.start.heading);

  TrajectorySetpoint sp;
  sp.p = leg.start.p + s.value * dp;
  sp.v = dp * (s.d1 / T);
  sp.a = dp * (s.d2 / (T * T));
  sp.yaw = wrap_angle(leg.start.heading + s.value * dpsi);
  sp.yaw_rate = dpsi * s.d1 / T;
  sp.yaw_accel = dpsi * s.d2 / (T * T);
  if (t >= T) {
    // Land exactly on the endpoint.
    sp.p = leg.end.p;
    sp.yaw = leg.end.heading;
  }
  return sp;
}

TrajectorySetpoint hold_at(const Waypoint& w) {
  TrajectorySetpoint sp;
  sp.p = w.p;
  sp.yaw = w.heading;
  return sp;
}

}  // namespace rotor::nav
