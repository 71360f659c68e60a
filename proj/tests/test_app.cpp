#include "rotor/app/commands.hpp"
#include "rotor/app/metrics.hpp"
#include "rotor/app/nodes.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rotor;
using namespace rotor::app;
namespace fs = std::filesystem;

namespace {

const char* kMission = R"(v_max: 3.0
waypoints:
  - {n: 0.0,   e: 0.0,  d: -5.0, heading_deg: 130}
  - {n: -20.0, e: 0.0,  d: -8.0, heading_deg: 130}
  - {n: -20.0, e: 20.0, d: -5.0, heading_deg: 130}
)";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rotor_test_app_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::vector<std::string> problems_of(const std::string& config_text) {
  try {
    const StackConfig cfg = parse_config(config_text, "cfg.yaml");
    return sanity_check(cfg, nullptr);
  } catch (const ConfigError& e) {
    return e.problems();
  }
}

bool mentions(const std::vector<std::string>& problems, const std::string& what) {
  for (const auto& p : problems)
    if (p.find(what) != std::string::npos) return true;
  return false;
}

struct Run {
  int code;
  std::string out, err;
  std::map<std::string, std::string> summary;
};

Run fly_mission(const fs::path& dir, const std::string& config, std::optional<double> duration = std::nullopt,
                std::optional<std::uint64_t> seed = std::nullopt) {
  put(dir / "in_config.yaml", config);
  put(dir / "in_mission.yaml", kMission);
  SimRunOptions o;
  o.config = dir / "in_config.yaml";
  o.mission = dir / "in_mission.yaml";
  o.out = dir / "log";
  o.duration = duration;
  o.seed = seed;
  std::ostringstream out, err;
  Run r;
  r.code = sim_run(o, out, err);
  r.out = out.str();
  r.err = err.str();
  if (fs::exists(o.out / "summary.kv")) r.summary = read_summary_kv(o.out / "summary.kv");
  return r;
}

// Commands a fixed total thrust through the pass-through path.
class ConstantThrustFollower : public FollowerRole {
 public:
  ConstantThrustFollower(rt::Bus& bus, double thrust) : FollowerRole(bus), thrust_(thrust) {}
  void tick(const rt::TickContext& ctx) override {
    ctrl::ControlCommand c;
    c.stamp = ctx.t;
    c.mode = static_cast<int>(ctrl::Mode::kPassThrough);
    c.values = {thrust_, 0.0, 0.0, 0.0};
    command_out_.publish(c);
  }

 private:
  double thrust_;
};

}  // namespace

TEST_CASE("default configuration validates") {
  const StackConfig cfg = default_config();
  const MissionSpec m = parse_mission(kMission, cfg.sensors.home, "m.yaml");
  CHECK(sanity_check(cfg, &m).empty());
  CHECK(m.waypoints.size() == 3);
  CHECK(m.v_max == 3.0);
}

TEST_CASE("config diagnostics name the field and location") {
  auto p = problems_of("vehicle:\n  mass: 0\n");
  REQUIRE(p.size() == 1);
  CHECK(p[0].find("cfg.yaml:2:") == 0);
  CHECK(mentions(p, "vehicle.mass"));

  CHECK(mentions(problems_of("vehicle:\n  masss: 2\n"), "unknown key 'masss'"));
  CHECK(mentions(problems_of("sensors:\n  rates: {imu: -5}\n"), "sensors.rates.imu"));
  CHECK(mentions(problems_of("nodes:\n  sim: {impl: rigid_body, rate: 2000}\n"), "sim"));
  CHECK(mentions(problems_of("vehicle:\n  motor_max_thrust: 3\n"), "hover"));
  CHECK(mentions(problems_of("estimator:\n  noise_scaling: quadratic\n"), "noise_scaling"));
  CHECK(mentions(problems_of("vehicle: [1, 2\n"), "cfg.yaml"));
}

TEST_CASE("mission diagnostics") {
  const sim::HomeLocation home;
  auto problems = [&](const std::string& text) -> std::vector<std::string> {
    try {
      const MissionSpec m = parse_mission(text, home, "m.yaml");
      return sanity_check(default_config(), &m);
    } catch (const ConfigError& e) {
      return e.problems();
    }
  };
  CHECK(mentions(problems("v_max: 3\nwaypoints:\n  - {n: .nan, e: 0, d: -5}\n"), "waypoints[0].n"));
  CHECK(mentions(problems("waypoints:\n  - {n: 0, e: 0, d: -5}\n"), "v_max"));
  CHECK(mentions(problems("v_max: 3\nwaypoints: []\n"), "waypoints"));
  CHECK(mentions(problems("v_max: 3\nwaypoints:\n  - {n: 0, e: 0, d: 4}\n"), "below"));

  try {
    load_mission("/definitely/not/here.yaml", home);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(mentions(e.problems(), "/definitely/not/here.yaml"));
  }
}

TEST_CASE("geodetic waypoints resolve to the same local points") {
  const sim::HomeLocation home;
  const double R = 6378137.0;
  const double lat = home.lat - 20.0 / R;
  const double lon = home.lon + 20.0 / (R * std::cos(lat));
  std::ostringstream text;
  text.precision(17);
  text << "v_max: 3\nwaypoints:\n  - {lat_deg: " << lat * 180.0 / M_PI << ", lon_deg: " << lon * 180.0 / M_PI
       << ", alt_m: " << home.alt + 5.0 << "}\n";
  const MissionSpec m = parse_mission(text.str(), home, "m.yaml");
  REQUIRE(m.waypoints.size() == 1);
  CHECK(m.waypoints[0].p.x() == doctest::Approx(-20.0).epsilon(1e-6));
  CHECK(m.waypoints[0].p.y() == doctest::Approx(20.0).epsilon(1e-6));
  CHECK(m.waypoints[0].p.z() == doctest::Approx(-5.0).epsilon(1e-9));
}

TEST_CASE("sim-run flies the three-waypoint mission") {
  const Run r = fly_mission(scratch("fly"), "seed: 1\n");
  CHECK(r.code == kExitOk);
  CHECK(r.summary.at("mission_complete") == "true");
  CHECK(r.summary.at("failsafe") == "false");
  CHECK(std::stod(r.summary.at("path_rmse_m")) < 0.6);
  CHECK(r.summary.count("wall_time_s") == 0);
}

TEST_CASE("the same seed gives byte-identical logs and another seed does not") {
  const fs::path a = scratch("seed_a"), b = scratch("seed_b"), c = scratch("seed_c");
  REQUIRE(fly_mission(a, "seed: 5\n", 6.0).code == kExitFailsafe);
  REQUIRE(fly_mission(b, "seed: 5\n", 6.0).code == kExitFailsafe);
  fly_mission(c, "seed: 6\n", 6.0);
  for (const auto& entry : fs::directory_iterator(a / "log")) {
    const std::string name = entry.path().filename().string();
    CHECK_MESSAGE(slurp(entry.path()) == slurp(b / "log" / name), name);
  }
  CHECK(slurp(a / "log" / "imu.csv") != slurp(c / "log" / "imu.csv"));
}

TEST_CASE("a short run is reported as incomplete, bad input as a user error") {
  const Run r = fly_mission(scratch("short"), "seed: 1\n", 3.0);
  CHECK(r.code == kExitFailsafe);
  CHECK(r.summary.at("mission_complete") == "false");
  CHECK(r.err.find("mission not completed") != std::string::npos);

  const Run bad = fly_mission(scratch("bad"), "vehicle: {mass: -2}\n");
  CHECK(bad.code == kExitUserError);
  CHECK(bad.err.find("vehicle.mass") != std::string::npos);
}

TEST_CASE("replay reproduces the live estimates bit for bit") {
  const fs::path dir = scratch("replay");
  const std::string config =
      "seed: 3\nparam_updates:\n  - {t: 4.0, role: estimator, key: gnss_position_sigma, value: 0.6}\n";
  fly_mission(dir, config, 12.0);
  ReplayOptions o;
  o.log = dir / "log";
  o.config = dir / "in_config.yaml";
  o.out = dir / "replay";
  std::ostringstream out, err;
  REQUIRE(replay_estimator(o, out, err) == kExitOk);

  const auto live = rt::read_topic<rt::EstimateMsg>(o.log, rt::read_manifest(o.log), rt::topics::kEstimate);
  const auto again = rt::read_topic<rt::EstimateMsg>(o.out, rt::read_manifest(o.out), kReplayTopic);
  REQUIRE(live.messages.size() == again.messages.size());
  REQUIRE(live.messages.size() > 2000);
  int mismatches = 0;
  for (std::size_t i = 0; i < live.messages.size(); ++i) {
    std::vector<double> x, y;
    rt::MessageTraits<rt::EstimateMsg>::flatten(live.messages[i], x);
    rt::MessageTraits<rt::EstimateMsg>::flatten(again.messages[i], y);
    if (x != y) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("replay without truth marks statistics unavailable") {
  const fs::path dir = scratch("notruth");
  fly_mission(dir, "seed: 2\n", 4.0);
  rt::LogManifest m = rt::read_manifest(dir / "log");
  std::erase_if(m.topics, [](const rt::TopicManifest& t) { return t.name == rt::topics::kTruth; });
  rt::write_manifest(dir / "log", m);
  fs::remove(dir / "log" / "truth.csv");

  ReplayOptions o;
  o.log = dir / "log";
  o.config = dir / "in_config.yaml";
  o.out = dir / "replay";
  std::ostringstream out, err;
  REQUIRE(replay_estimator(o, out, err) == kExitOk);
  const auto kv = read_summary_kv(o.out / "summary.kv");
  CHECK(kv.at("estimator_stats") == "unavailable");
  CHECK(kv.count("est_pos_rms_m") == 0);
}

TEST_CASE("replay reports a corrupt log with its line number") {
  const fs::path dir = scratch("corrupt");
  fly_mission(dir, "seed: 2\n", 2.0);
  std::string text = slurp(dir / "log" / "gnss.csv");
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) pos = text.find('\n', pos) + 1;
  text.insert(pos, "not,a,row\n");
  put(dir / "log" / "gnss.csv", text);
  ReplayOptions o;
  o.log = dir / "log";
  o.config = dir / "in_config.yaml";
  o.out = dir / "replay";
  std::ostringstream out, err;
  CHECK(replay_estimator(o, out, err) == kExitUserError);
  CHECK(err.str().find("line 4") != std::string::npos);
}

TEST_CASE("a stub follower can replace the stock one through the registry") {
  StackConfig cfg = default_config();
  const MissionSpec mission = parse_mission(kMission, cfg.sensors.home, "m.yaml");
  for (auto& n : cfg.nodes)
    if (n.role == "follower") n.impl = "constant_thrust";
  const double hover = cfg.vehicle.mass * 9.80665;

  std::vector<rt::TruthMsg> truth;
  rt::Subscription<rt::TruthMsg> sub;
  StackHooks hooks;
  hooks.before_bind = [&](rt::Registry& reg) {
    reg.provide("follower", "constant_thrust", [hover](rt::Bus& bus, const rt::NodeDescriptor&) {
      return std::make_unique<ConstantThrustFollower>(bus, 1.2 * hover);
    });
    sub = reg.bus().subscribe<rt::TruthMsg>(rt::topics::kTruth);
  };
  const rt::RunReport r = run_stack(cfg, mission, std::nullopt, 2.0, hooks);
  CHECK_FALSE(r.failsafe);
  truth = sub.drain();
  REQUIRE_FALSE(truth.empty());
  // 0.2 g net upward with linear drag only slowing it: climb between the drag-free
  // bound and a loose lower bound.
  const double climb = -truth.back().p.z();
  const double free = 0.5 * 0.2 * 9.80665 * 2.0 * 2.0;
  CHECK(climb < free + 1e-6);
  CHECK(climb > 0.8 * free);
  CHECK(std::abs(truth.back().p.x()) < 1e-6);
}

TEST_CASE("removing the logger leaves the flight unchanged") {
  const StackConfig cfg = default_config();
  const MissionSpec mission = parse_mission(kMission, cfg.sensors.home, "m.yaml");
  auto fly = [&](bool with_logger) {
    rt::Subscription<rt::TruthMsg> sub;
    StackHooks hooks;
    hooks.before_bind = [&](rt::Registry& reg) { sub = reg.bus().subscribe<rt::TruthMsg>(rt::topics::kTruth); };
    std::optional<rt::LoggerOptions> log;
    if (with_logger) {
      log.emplace();
      log->dir = scratch("with_logger");
    } else {
      hooks.skip_roles = {"logger"};
    }
    run_stack(cfg, mission, log, 8.0, hooks);
    std::vector<double> flat;
    for (const auto& m : sub.drain()) rt::MessageTraits<rt::TruthMsg>::flatten(m, flat);
    return flat;
  };
  const auto a = fly(true);
  const auto b = fly(false);
  REQUIRE(a.size() > 1000);
  CHECK(a == b);
}

TEST_CASE("gyro bias converges while sitting on the ground") {
  const StackConfig cfg = default_config();
  const MissionSpec mission = parse_mission(kMission, cfg.sensors.home, "m.yaml");
  rt::Subscription<rt::EstimateMsg> sub;
  StackHooks hooks;
  hooks.before_bind = [&](rt::Registry& reg) { sub = reg.bus().subscribe<rt::EstimateMsg>(rt::topics::kEstimate); };
  hooks.skip_roles = {"planner", "manager", "follower", "controller", "firmware", "logger"};
  const rt::RunReport r = run_stack(cfg, mission, std::nullopt, 30.0, hooks);
  CHECK_FALSE(r.failsafe);
  const auto est = sub.drain();
  REQUIRE_FALSE(est.empty());
  const Vec3 err = est.back().x.gyro_bias - cfg.sensors.gyro_bias;
  CHECK(err.cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("runtime parameter updates reach the simulator") {
  StackConfig cfg = default_config();
  const MissionSpec mission = parse_mission(kMission, cfg.sensors.home, "m.yaml");
  cfg.param_updates.push_back({1.0, "sim", "wind_n", 3.0});
  cfg.param_updates.push_back({1.0, "sim", "no_such_key", 3.0});
  const rt::RunReport r = run_stack(cfg, mission, std::nullopt, 2.0);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("no_such_key") != std::string::npos);
}

TEST_CASE("path distance oracle") {
  const Vec3 a(0, 0, 0), b(10, 0, 0);
  CHECK(distance_to_segment(Vec3(5, 3, 4), a, b) == doctest::Approx(5.0));
  CHECK(distance_to_segment(Vec3(-3, 4, 0), a, b) == doctest::Approx(5.0));
  CHECK(distance_to_segment(Vec3(13, 0, 4), a, b) == doctest::Approx(5.0));
  CHECK(distance_to_segment(Vec3(2, 1, 0), a, a) == doctest::Approx(std::sqrt(5.0)));
}
