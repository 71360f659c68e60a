#include "rotor/runtime/scheduler.hpp"

#include "rotor/rate_gate.hpp"

#include <algorithm>
#include <cmath>

namespace rotor::rt {

Scheduler::Scheduler(Registry& registry, double base_rate) : registry_(registry), base_rate_(base_rate) {
  if (!(base_rate > 0.0)) throw RegistryError("base rate must be positive");
}

void Scheduler::schedule(const ParamUpdate& u) {
  pending_.push_back(u);
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const ParamUpdate& a, const ParamUpdate& b) { return a.t < b.t; });
}

RunReport Scheduler::run(double duration, const std::vector<std::string>& required) {
  for (const auto& role : required) {
    if (!registry_.find(role)) throw RegistryError("required role '" + role + "' is not bound");
  }

  struct Slot {
    std::string role;
    Node* node;
    RateGate gate;
    double dt;
  };
  std::vector<Slot> slots;
  for (const char* role : kRoleOrder) {
    Node* node = registry_.find(role);
    if (!node) continue;
    const double rate = registry_.descriptor(role)->rate;
    slots.push_back({role, node, RateGate(rate, base_rate_), 1.0 / rate});
  }

  Bus& bus = registry_.bus();
  Topic<ParamMsg>& params = bus.topic<ParamMsg>(topics::kParams, false);
  Subscription<ParamMsg> param_inbox = params.subscribe();

  RunReport report;
  for (const auto& s : slots) report.executions[s.role] = 0;

  std::size_t next_param = 0;
  const auto ticks = static_cast<std::int64_t>(std::floor(duration * base_rate_ + 1e-9));
  std::int64_t k = 0;
  try {
    for (const auto& s : slots) s.node->start(bus);
    for (; k < ticks; ++k) {
      const double t = static_cast<double>(k) / base_rate_;
      while (next_param < pending_.size() && pending_[next_param].t <= t + 1e-12) {
        const ParamUpdate& u = pending_[next_param++];
        params.publish({t, u.role, u.key, u.value});
      }
      for (const ParamMsg& m : param_inbox.drain()) {
        Node* target = registry_.find(m.role);
        if (!target || !target->set_param(m.key, m.value)) {
          report.warnings.push_back("t=" + std::to_string(t) + ": parameter '" + m.role + "." + m.key +
                                    "' was not applied");
        }
      }
      for (auto& s : slots) {
        if (!s.gate.due(k)) continue;
        try {
          s.node->tick({k, t, s.dt});
        } catch (const std::exception& e) {
          report.failsafe = true;
          report.fault_role = s.role;
          report.fault_message = e.what();
          report.fault_time = t;
          throw;
        }
        ++report.executions[s.role];
      }
      report.end_time = t;
    }
  } catch (const std::exception& e) {
    if (!report.failsafe) {
      report.failsafe = true;
      report.fault_message = e.what();
      report.fault_time = static_cast<double>(k) / base_rate_;
    }
  }
  report.ticks = report.failsafe ? k + 1 : k;
  for (auto& s : slots) {
    try {
      s.node->finish();
    } catch (const std::exception& e) {
      report.warnings.push_back(s.role + " finish: " + e.what());
    }
  }
  return report;
}

}  // namespace rotor::rt
