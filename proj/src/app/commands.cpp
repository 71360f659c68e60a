#include "rotor/app/commands.hpp"

#include "rotor/app/metrics.hpp"
#include "rotor/app/nodes.hpp"

#include <chrono>
#include <iostream>

namespace rotor::app {

namespace fs = std::filesystem;

namespace {

void print_problems(std::ostream& err, const std::vector<std::string>& problems) {
  for (const auto& p : problems) err << "error: " << p << "\n";
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

rt::RunReport run_stack(const StackConfig& cfg, const MissionSpec& mission,
                        const std::optional<rt::LoggerOptions>& logger, double duration, const StackHooks& hooks) {
  rt::Bus bus;
  rt::Registry registry(bus);
  provide_defaults(registry, cfg, mission, logger);
  if (hooks.before_bind) hooks.before_bind(registry);
  std::vector<std::string> skip = hooks.skip_roles;
  if (!logger && std::find(skip.begin(), skip.end(), "logger") == skip.end() &&
      registry.implementations("logger").empty()) {
    skip.push_back("logger");
  }
  bind_nodes(registry, cfg, skip);
  rt::Scheduler scheduler(registry, cfg.base_rate);
  for (const auto& u : cfg.param_updates) scheduler.schedule(u);
  return scheduler.run(duration);
}

int sim_run(const SimRunOptions& opt, std::ostream& out, std::ostream& err) {
  StackConfig cfg;
  MissionSpec mission;
  std::string config_text, mission_text;
  try {
    config_text = read_file(opt.config);
    cfg = parse_config(config_text, opt.config.string());
    mission_text = read_file(opt.mission);
    mission = parse_mission(mission_text, cfg.sensors.home, opt.mission.string());
  } catch (const ConfigError& e) {
    print_problems(err, e.problems());
    return kExitUserError;
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.duration) {
    if (!(*opt.duration > 0.0)) {
      err << "error: --duration must be > 0\n";
      return kExitUserError;
    }
    cfg.duration = *opt.duration;
  }
  if (const auto problems = sanity_check(cfg, &mission); !problems.empty()) {
    print_problems(err, problems);
    return kExitUserError;
  }
  const double duration = cfg.duration ? *cfg.duration : auto_duration(cfg, mission);

  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) {
    err << "error: cannot create output directory " << opt.out << ": " << ec.message() << "\n";
    return kExitUserError;
  }
  {
    std::ofstream(opt.out / "config.yaml", std::ios::binary) << config_text;
    std::ofstream(opt.out / "mission.yaml", std::ios::binary) << mission_text;
  }
  rt::LoggerOptions log;
  log.dir = opt.out;
  log.seed = cfg.seed;
  log.config_hash = rt::fnv1a_hex(config_text + '\0' + mission_text);
  log.base_rate = cfg.base_rate;
  log.extra = {{"config_file", "config.yaml"},
               {"mission_file", "mission.yaml"},
               {"duration_s", duration},
               {"seed_override", opt.seed.has_value()}};

  const auto wall_start = std::chrono::steady_clock::now();
  rt::RunReport report;
  try {
    report = run_stack(cfg, mission, log, duration);
  } catch (const rt::RegistryError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUserError;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  Summary s;
  s.set("command", std::string("sim-run"));
  s.set_int("seed", static_cast<long long>(cfg.seed));
  s.set("config_hash", log.config_hash);
  s.set("duration_s", duration);
  add_run_report(s, report);
  if (report.failsafe) s.set("fault_message", one_line(report.fault_message));

  bool complete = false;
  try {
    const rt::LogManifest manifest = rt::read_manifest(opt.out);
    const auto estimates = rt::read_topic<rt::EstimateMsg>(opt.out, manifest, rt::topics::kEstimate).messages;
    const auto setpoints = rt::read_topic<rt::SetpointMsg>(opt.out, manifest, rt::topics::kSetpoint).messages;
    std::vector<rt::TruthMsg> truth;
    if (manifest.find(rt::topics::kTruth)) {
      truth = rt::read_topic<rt::TruthMsg>(opt.out, manifest, rt::topics::kTruth).messages;
    }
    const MissionMetrics mm = mission_metrics(estimates, setpoints, truth.empty() ? nullptr : &truth, mission,
                                              cfg.arrival_radius);
    add_mission_metrics(s, mm);
    add_estimator_stats(s, estimator_stats(estimates, truth, cfg.sensors.gyro_bias));
    complete = !report.failsafe && mm.all_reached && mm.reached_hold;
  } catch (const rt::LogError& e) {
    s.set("metrics_error", one_line(e.what()));
  }
  s.set("mission_complete", complete);
  const int code = complete ? kExitOk : kExitFailsafe;
  s.set_int("exit_code", code);
  s.write(opt.out, "sim-run summary");

  out << s.kv_text();
  out << "wall_time_s=" << wall << "\n";
  if (report.failsafe) {
    err << "failsafe stop at t=" << report.fault_time << " s (" << (report.fault_role.empty() ? "runtime" : report.fault_role)
        << "): " << report.fault_message << "\n";
  } else if (!complete) {
    err << "mission not completed\n";
  }
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  return code;
}

int replay_estimator(const ReplayOptions& opt, std::ostream& out, std::ostream& err) {
  StackConfig cfg;
  try {
    cfg = load_config(opt.config);
  } catch (const ConfigError& e) {
    print_problems(err, e.problems());
    return kExitUserError;
  }

  std::vector<est::SensorEvent> events;
  std::vector<rt::TruthMsg> truth;
  rt::LogManifest manifest;
  bool truncated = false;
  double cutoff = std::numeric_limits<double>::infinity();
  try {
    manifest = rt::read_manifest(opt.log);
    auto take = [&](auto log) {
      if (log.truncated) {
        truncated = true;
        cutoff = std::min(cutoff, log.messages.empty() ? -1.0 : log.messages.back().stamp);
      }
      for (auto& m : log.messages) events.emplace_back(m);
    };
    take(rt::read_topic<rt::ImuMsg>(opt.log, manifest, rt::topics::kImu));
    take(rt::read_topic<rt::BaroMsg>(opt.log, manifest, rt::topics::kBaro));
    take(rt::read_topic<rt::MagMsg>(opt.log, manifest, rt::topics::kMag));
    take(rt::read_topic<rt::GnssMsg>(opt.log, manifest, rt::topics::kGnss));
    if (manifest.find(rt::topics::kTruth)) {
      truth = rt::read_topic<rt::TruthMsg>(opt.log, manifest, rt::topics::kTruth).messages;
    }
  } catch (const rt::LogError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUserError;
  }
  if (truncated) {
    // Stop where the shortest truncated stream ends so every stream is complete.
    std::erase_if(events, [&](const est::SensorEvent& e) { return est::event_stamp(e) > cutoff; });
  }

  std::vector<rt::ParamUpdate> params;
  for (const auto& u : cfg.param_updates)
    if (u.role == "estimator") params.push_back(u);
  std::stable_sort(params.begin(), params.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  std::stable_sort(events.begin(), events.end(), [](const est::SensorEvent& a, const est::SensorEvent& b) {
    return est::event_stamp(a) < est::event_stamp(b);
  });

  EstimatorCore core(cfg.estimator.ekf);
  std::vector<rt::EstimateMsg> estimates;
  std::size_t next_param = 0, i = 0;
  while (i < events.size()) {
    const double stamp = est::event_stamp(events[i]);
    while (next_param < params.size() && params[next_param].t <= stamp + 1e-12) {
      if (!core.set_param(params[next_param].key, params[next_param].value)) {
        err << "warning: estimator parameter '" << params[next_param].key << "' was not applied\n";
      }
      ++next_param;
    }
    std::vector<est::SensorEvent> group;
    for (; i < events.size() && est::event_stamp(events[i]) == stamp; ++i) group.push_back(events[i]);
    for (auto& e : core.process(std::move(group))) estimates.push_back(e);
    if (core.ekf().faulted()) {
      err << "error: estimator fault at t=" << stamp << " s\n";
      break;
    }
  }

  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) {
    err << "error: cannot create output directory " << opt.out << ": " << ec.message() << "\n";
    return kExitUserError;
  }
  rt::TopicManifest tm{kReplayTopic, std::string(kReplayTopic) + ".csv", rt::MessageTraits<rt::EstimateMsg>::schema,
                       rt::MessageTraits<rt::EstimateMsg>::columns(), 0};
  {
    rt::CsvTopicWriter w(opt.out / tm.file, tm.columns);
    std::vector<double> row;
    for (const auto& e : estimates) {
      row.clear();
      rt::MessageTraits<rt::EstimateMsg>::flatten(e, row);
      w.write(row);
    }
    tm.rows = w.rows();
  }
  rt::LogManifest out_manifest;
  if (fs::exists(opt.out / "manifest.json")) {
    try {
      out_manifest = rt::read_manifest(opt.out);
    } catch (const rt::LogError&) {
      out_manifest = rt::LogManifest{};
    }
  } else {
    out_manifest.seed = manifest.seed;
    out_manifest.config_hash = manifest.config_hash;
    out_manifest.base_rate = manifest.base_rate;
    out_manifest.extra = {{"replay_of", fs::absolute(opt.log).string()}};
  }
  std::erase_if(out_manifest.topics, [](const rt::TopicManifest& t) { return t.name == kReplayTopic; });
  out_manifest.topics.push_back(tm);
  rt::write_manifest(opt.out, out_manifest);

  Summary s;
  s.set("command", std::string("replay-estimator"));
  s.set_int("estimates", static_cast<long long>(estimates.size()));
  s.set("log_truncated", truncated);
  s.set("estimator_faulted", core.ekf().faulted());
  add_estimator_stats(s, estimator_stats(estimates, truth, cfg.sensors.gyro_bias));
  s.write(opt.out, "replay-estimator summary");
  out << s.kv_text();
  if (truncated) err << "warning: log was truncated; replay stopped at t=" << cutoff << " s\n";
  return core.ekf().faulted() ? kExitFailsafe : kExitOk;
}

int validate(const fs::path& config, const std::optional<fs::path>& mission_path, std::ostream& out,
             std::ostream& err) {
  StackConfig cfg;
  std::optional<MissionSpec> mission;
  try {
    cfg = load_config(config);
    if (mission_path) mission = load_mission(*mission_path, cfg.sensors.home);
  } catch (const ConfigError& e) {
    print_problems(err, e.problems());
    return kExitUserError;
  }
  std::vector<std::string> problems = sanity_check(cfg, mission ? &*mission : nullptr);
  try {
    rt::Bus bus;
    rt::Registry registry(bus);
    provide_defaults(registry, cfg, mission.value_or(MissionSpec{}), rt::LoggerOptions{});
    // Only check bindings; the logger would touch the filesystem on start, not here.
    bind_nodes(registry, cfg);
  } catch (const std::exception& e) {
    problems.push_back(std::string("nodes: ") + e.what());
  }
  if (!problems.empty()) {
    print_problems(err, problems);
    return kExitUserError;
  }
  out << "ok: " << config.string();
  if (mission_path) out << " + " << mission_path->string();
  out << "\n";
  return kExitOk;
}

}  // namespace rotor::app
