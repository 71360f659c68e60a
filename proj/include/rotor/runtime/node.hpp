#pragma once

#include "rotor/runtime/bus.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace rotor::rt {

/// Raised by a node when it cannot continue; the scheduler turns it into a
/// failsafe stop.
class NodeFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TickContext {
  std::int64_t tick = 0;
  double t = 0.0;   // s
  double dt = 0.0;  // node period, s
};

/// Role keys in execution order.
inline constexpr std::array<const char*, 8> kRoleOrder = {"sim",        "estimator", "planner",  "manager",
                                                          "follower",   "controller", "firmware", "logger"};

bool is_role(const std::string& role);

struct NodeDescriptor {
  std::string role;
  std::string impl;
  double rate = 0.0;  // Hz
  std::map<std::string, double> params;
};

class Node {
 public:
  virtual ~Node() = default;

  /// Called once before the first tick, after every node is constructed.
  virtual void start(Bus&) {}
  virtual void tick(const TickContext& ctx) = 0;
  /// Called once after the last tick, also after a fault.
  virtual void finish() {}
  /// Runtime parameter change. Returns false for unknown keys.
  virtual bool set_param(const std::string& key, double value);
};

}  // namespace rotor::rt
