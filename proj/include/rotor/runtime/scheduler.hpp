#pragma once

#include "rotor/runtime/registry.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rotor::rt {

struct ParamUpdate {
  double t = 0.0;
  std::string role;
  std::string key;
  double value = 0.0;
};

struct RunReport {
  bool failsafe = false;
  std::string fault_role;
  std::string fault_message;
  double fault_time = 0.0;
  std::int64_t ticks = 0;
  double end_time = 0.0;  // time of the last executed tick
  std::map<std::string, std::int64_t> executions;
  std::vector<std::string> warnings;
};

/// Single-clock fixed-step executor. On each tick the due nodes run in role
/// order, so a message published during a tick reaches later roles in the
/// same tick and earlier roles on the next one.
class Scheduler {
 public:
  Scheduler(Registry& registry, double base_rate);

  /// Queues a parameter change; it is published on the param topic at the
  /// first tick boundary at or after `u.t`.
  void schedule(const ParamUpdate& u);

  /// Runs floor(duration * base_rate) ticks. Throws RegistryError when a
  /// required role is unbound.
  RunReport run(double duration, const std::vector<std::string>& required = {});

  double base_rate() const { return base_rate_; }

 private:
  Registry& registry_;
  double base_rate_;
  std::vector<ParamUpdate> pending_;
};

}  // namespace rotor::rt
