#pragma once

#include "rotor/app/config.hpp"
#include "rotor/runtime/log.hpp"
#include "rotor/runtime/registry.hpp"
#include "rotor/runtime/scheduler.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>

namespace rotor::app {

/// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitFailsafe = 2;

struct StackHooks {
  /// Runs after the stock implementations are provided and before binding;
  /// may provide alternates or subscribe to topics.
  std::function<void(rt::Registry&)> before_bind;
  /// Roles left unbound.
  std::vector<std::string> skip_roles;
};

/// Builds the stack from config and runs it for `duration` seconds.
rt::RunReport run_stack(const StackConfig& cfg, const MissionSpec& mission,
                        const std::optional<rt::LoggerOptions>& logger, double duration,
                        const StackHooks& hooks = {});

struct SimRunOptions {
  std::filesystem::path config;
  std::filesystem::path mission;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
};

int sim_run(const SimRunOptions& opt, std::ostream& out, std::ostream& err);

struct ReplayOptions {
  std::filesystem::path log;
  std::filesystem::path config;
  std::filesystem::path out;
};

int replay_estimator(const ReplayOptions& opt, std::ostream& out, std::ostream& err);

int validate(const std::filesystem::path& config, const std::optional<std::filesystem::path>& mission,
             std::ostream& out, std::ostream& err);

/// Name of the topic replay writes its estimates to.
inline constexpr const char* kReplayTopic = "estimate_replay";

}  // namespace rotor::app
