#include "rotor/navigation/path_manager.hpp"

#include <stdexcept>

namespace rotor::nav {

PathManager::PathManager(ManagerConfig cfg) : cfg_(cfg) {}

void PathManager::set_mission(const std::vector<Waypoint>& waypoints, double v_max) {
  if (waypoints.empty()) throw std::invalid_argument("mission has no waypoints");
  waypoints_ = waypoints;
  legs_.clear();
  std::vector<Waypoint> chain;
  if (cfg_.takeoff) {
    takeoff_ = {Vec3(0.0, 0.0, -cfg_.takeoff_altitude), waypoints.front().heading};
    chain.push_back(takeoff_);
  }
  chain.insert(chain.end(), waypoints.begin(), waypoints.end());
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) legs_.push_back(make_leg(chain[i], chain[i + 1], v_max, cfg_.t_min));
  leg_ = 0;
  t_ = 0.0;
  phase_ = cfg_.takeoff ? Phase::kTakeoff : (legs_.empty() ? Phase::kHold : Phase::kLeg);
}

double PathManager::total_leg_time() const {
  double sum = 0.0;
  for (const auto& l : legs_) sum += l.duration;
  return sum;
}

ManagerOutput PathManager::hold_output(const Waypoint& w, Phase phase) const {
  ManagerOutput out;
  out.sp = hold_at(w);
  out.phase = phase;
  out.leg = phase == Phase::kTakeoff ? -1 : static_cast<int>(legs_.size());
  out.leg_start = w;
  out.leg_end = w;
  return out;
}

ManagerOutput PathManager::step(const std::optional<est::StateVector>& estimate, double dt) {
  if (waypoints_.empty()) throw std::logic_error("path manager has no mission");

  if (phase_ == Phase::kTakeoff) {
    const bool settled = estimate && (estimate->p - takeoff_.p).norm() < cfg_.takeoff_tolerance &&
                         estimate->v.norm() < cfg_.takeoff_speed_tolerance;
    if (!settled) return hold_output(takeoff_, Phase::kTakeoff);
    phase_ = legs_.empty() ? Phase::kHold : Phase::kLeg;
    leg_ = 0;
    t_ = 0.0;
  }

  if (phase_ == Phase::kHold) return hold_output(waypoints_.back(), Phase::kHold);

  const WaypointLeg& leg = legs_[leg_];
  ManagerOutput out;
  out.sp = sample_trajectory(leg, t_);
  out.phase = Phase::kLeg;
  out.leg = leg_;
  out.leg_start = leg.start;
  out.leg_end = leg.end;

  t_ += dt;
  while (leg_ < static_cast<int>(legs_.size()) && t_ >= legs_[leg_].duration) {
    t_ -= legs_[leg_].duration;
    ++leg_;
  }
  if (leg_ == static_cast<int>(legs_.size())) phase_ = Phase::kHold;
  return out;
}

}  // namespace rotor::nav
