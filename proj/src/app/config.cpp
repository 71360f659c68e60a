#include "rotor/app/config.hpp"

#include "rotor/estimator/measurements.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace rotor::app {

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += (out.empty() ? "" : "\n") + l;
  return out;
}

enum class Bound { kAny, kPositive, kNonNegative };

/// Walks one mapping, remembering which keys were read so leftovers can be
/// reported as unknown.
enum class Unit { kAsIs, kDegrees };

class Section {
 public:
  Section(YAML::Node node, std::string path, const std::string& source, std::vector<std::string>& errors)
      : node_(std::move(node)), path_(std::move(path)), source_(source), errors_(errors) {
    if (node_ && !node_.IsMap() && !node_.IsNull()) {
      fail(node_, "expected a mapping");
      node_ = YAML::Node();
    }
  }

  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  ~Section() {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return has(key) ? node_[key] : YAML::Node();
  }

  Section child(const std::string& key) { return Section(raw(key), name(key), source_, errors_); }

  void num(const std::string& key, double& out, Bound bound = Bound::kAny, Unit unit = Unit::kAsIs) {
    const YAML::Node n = raw(key);
    if (!n || n.IsNull()) return;
    double v = 0.0;
    if (!scalar(n, key, v)) return;
    if (bound == Bound::kPositive && !(v > 0.0)) return fail(n, name(key) + ": must be > 0");
    if (bound == Bound::kNonNegative && !(v >= 0.0)) return fail(n, name(key) + ": must be >= 0");
    out = unit == Unit::kDegrees ? deg2rad(v) : v;
  }

  void integer(const std::string& key, int& out, int min) {
    const YAML::Node n = raw(key);
    if (!n || n.IsNull()) return;
    try {
      const int v = n.as<int>();
      if (v < min) return fail(n, name(key) + ": must be >= " + std::to_string(min));
      out = v;
    } catch (const YAML::Exception&) {
      fail(n, name(key) + ": expected an integer");
    }
  }

  void flag(const std::string& key, bool& out) {
    const YAML::Node n = raw(key);
    if (!n || n.IsNull()) return;
    try {
      out = n.as<bool>();
    } catch (const YAML::Exception&) {
      fail(n, name(key) + ": expected true or false");
    }
  }

  void text(const std::string& key, std::string& out) {
    const YAML::Node n = raw(key);
    if (!n || n.IsNull()) return;
    if (!n.IsScalar()) return fail(n, name(key) + ": expected a string");
    out = n.as<std::string>();
  }

  void vec3(const std::string& key, Vec3& out, Bound bound = Bound::kAny) {
    const YAML::Node n = raw(key);
    if (!n || n.IsNull()) return;
    if (!n.IsSequence() || n.size() != 3) return fail(n, name(key) + ": expected a list of 3 numbers");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
      if (!scalar(n[i], key + "[" + std::to_string(i) + "]", v(i))) return;
      if (bound == Bound::kPositive && !(v(i) > 0.0)) return fail(n[i], name(key) + ": entries must be > 0");
      if (bound == Bound::kNonNegative && !(v(i) >= 0.0)) return fail(n[i], name(key) + ": entries must be >= 0");
    }
    out = v;
  }

  void fail(const YAML::Node& at, const std::string& msg) {
    const YAML::Mark m = at.Mark();
    if (m.line >= 0) {
      errors_.push_back(source_ + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1) + ": " + msg);
    } else {
      errors_.push_back(source_ + ": " + msg);
    }
  }
  void fail_here(const std::string& msg) { fail(node_, msg); }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const YAML::Node& node() const { return node_; }
  const std::string& path() const { return path_; }

 private:
  bool scalar(const YAML::Node& n, const std::string& key, double& v) {
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "not a scalar");
      v = n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, name(key) + ": expected a number");
      return false;
    }
    if (!std::isfinite(v)) {
      fail(n, name(key) + ": must be finite");
      return false;
    }
    return true;
  }

  YAML::Node node_;
  std::string path_;
  const std::string& source_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

void read_pid(Section s, ctrl::PidGains& g) {
  s.num("kp", g.kp, Bound::kNonNegative);
  s.num("ki", g.ki, Bound::kNonNegative);
  s.num("kd", g.kd, Bound::kNonNegative);
  s.num("out_limit", g.out_limit, Bound::kPositive);
  s.num("i_limit", g.i_limit, Bound::kNonNegative);
}

YAML::Node parse_yaml(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({source + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                       ": " + e.msg});
  }
}

void set_diag3(est::StateMat& Q, int offset, double v) {
  for (int i = 0; i < 3; ++i) Q(offset + i, offset + i) = v;
}

void read_estimator(Section s, StackConfig& cfg) {
  est::EkfConfig& e = cfg.estimator.ekf;
  s.integer("substeps", e.substeps, 1);
  std::string scaling = "printed";
  s.text("noise_scaling", scaling);
  if (scaling == "printed") e.scaling = est::NoiseScaling::kPrinted;
  else if (scaling == "linear") e.scaling = est::NoiseScaling::kLinear;
  else s.fail(s.raw("noise_scaling"), s.name("noise_scaling") + ": expected 'printed' or 'linear'");
  std::string origin = "first_fix";
  s.text("origin", origin);
  if (origin == "first_fix") cfg.estimator.origin = OriginMode::kFirstFix;
  else if (origin == "home") cfg.estimator.origin = OriginMode::kHome;
  else s.fail(s.raw("origin"), s.name("origin") + ": expected 'first_fix' or 'home'");
  s.num("gimbal_guard", e.gimbal_guard, Bound::kPositive);

  {
    Section q = s.child("process_noise");
    double pos = e.noise.Q(0, 0), vel = e.noise.Q(3, 3), att = e.noise.Q(6, 6), bias = e.noise.Q(9, 9);
    q.num("position", pos, Bound::kNonNegative);
    q.num("velocity", vel, Bound::kNonNegative);
    q.num("attitude", att, Bound::kNonNegative);
    q.num("gyro_bias", bias, Bound::kNonNegative);
    set_diag3(e.noise.Q, est::kPos, pos);
    set_diag3(e.noise.Q, est::kVel, vel);
    set_diag3(e.noise.Q, est::kAtt, att);
    set_diag3(e.noise.Q, est::kBias, bias);
  }
  {
    Section u = s.child("input_noise");
    double accel = std::sqrt(e.noise.Q_u(0, 0)), gyro = std::sqrt(e.noise.Q_u(3, 3));
    u.num("accel", accel, Bound::kNonNegative);
    u.num("gyro", gyro, Bound::kNonNegative);
    e.noise.Q_u.setZero();
    for (int i = 0; i < 3; ++i) {
      e.noise.Q_u(i, i) = accel * accel;
      e.noise.Q_u(3 + i, 3 + i) = gyro * gyro;
    }
  }
  {
    Section r = s.child("measurement_noise");
    double baro = std::sqrt(e.noise.R_baro), mag = std::sqrt(e.noise.R_mag(0, 0));
    double gp = std::sqrt(e.noise.R_gnss(0, 0)), gv = std::sqrt(e.noise.R_gnss(2, 2));
    r.num("baro", baro, Bound::kPositive);
    r.num("mag", mag, Bound::kPositive);
    r.num("gnss_position", gp, Bound::kPositive);
    r.num("gnss_velocity", gv, Bound::kPositive);
    e.noise.R_baro = baro * baro;
    e.noise.R_mag = Mat3::Identity() * mag * mag;
    e.noise.R_gnss.setZero();
    e.noise.R_gnss.diagonal() << gp * gp, gp * gp, gv * gv, gv * gv, gv * gv;
  }
  {
    Section p = s.child("initial_std");
    double pos = std::sqrt(e.P0_diag(0)), vel = std::sqrt(e.P0_diag(3)), att = std::sqrt(e.P0_diag(6)),
           bias = std::sqrt(e.P0_diag(9));
    p.num("position", pos, Bound::kPositive);
    p.num("velocity", vel, Bound::kPositive);
    p.num("attitude", att, Bound::kPositive);
    p.num("gyro_bias", bias, Bound::kPositive);
    e.P0_diag << Vec3::Constant(pos * pos), Vec3::Constant(vel * vel), Vec3::Constant(att * att),
        Vec3::Constant(bias * bias);
  }
  {
    Section g = s.child("gates");
    g.num("baro", e.gate_baro, Bound::kNonNegative);
    g.num("mag", e.gate_mag, Bound::kNonNegative);
    g.num("gnss", e.gate_gnss, Bound::kNonNegative);
  }
}

void read_nodes(Section s, StackConfig& cfg) {
  if (!s.node() || !s.node().IsMap()) return;
  for (const auto& kv : s.node()) {
    const std::string role = kv.first.as<std::string>();
    if (!rt::is_role(role)) continue;  // reported as unknown by the section
    Section n = s.child(role);
    auto it = std::find_if(cfg.nodes.begin(), cfg.nodes.end(), [&](const auto& d) { return d.role == role; });
    if (it == cfg.nodes.end()) {
      cfg.nodes.push_back({role, "", 0.0, {}});
      it = cfg.nodes.end() - 1;
    }
    bool enabled = true;
    n.flag("enabled", enabled);
    n.text("impl", it->impl);
    n.num("rate", it->rate, Bound::kPositive);
    Section params = n.child("params");
    if (params.node() && params.node().IsMap()) {
      for (const auto& p : params.node()) {
        const std::string key = p.first.as<std::string>();
        double v = 0.0;
        params.num(key, v);
        it->params[key] = v;
      }
    }
    if (it->impl.empty()) n.fail_here(n.name("impl") + ": required");
    if (!enabled) cfg.nodes.erase(it);
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

StackConfig default_config() {
  StackConfig c;
  c.nodes = {{"sim", "rigid_body", 1000.0, {}},        {"estimator", "ekf", 1000.0, {}},
             {"planner", "waypoint_list", 10.0, {}},   {"manager", "smoothstep", 100.0, {}},
             {"follower", "flatness_pid", 100.0, {}},  {"controller", "cascade", 100.0, {}},
             {"firmware", "emulated", 1000.0, {}},     {"logger", "csv", 1000.0, {}}};

  est::NoiseConfig& n = c.estimator.ekf.noise;
  n.Q.setZero();
  set_diag3(n.Q, est::kPos, 1e-4);
  set_diag3(n.Q, est::kVel, 1e-2);
  set_diag3(n.Q, est::kAtt, 1e-4);
  set_diag3(n.Q, est::kBias, 1e-6);
  n.Q_u.setZero();
  for (int i = 0; i < 3; ++i) {
    n.Q_u(i, i) = 1.0;
    n.Q_u(3 + i, 3 + i) = 0.005 * 0.005;
  }
  n.R_baro = 3.0 * 3.0;
  n.R_mag = Mat3::Identity() * 0.005 * 0.005;
  n.R_gnss.setZero();
  n.R_gnss.diagonal() << 0.16, 0.16, 0.0025, 0.0025, 0.0025;
  c.estimator.ekf.scaling = est::NoiseScaling::kPrinted;
  c.estimator.ekf.P0_diag.segment<3>(est::kAtt).setConstant(0.02 * 0.02);
  return c;
}

StackConfig parse_config(const std::string& text, const std::string& source) {
  const YAML::Node root = parse_yaml(text, source);
  StackConfig cfg = default_config();
  std::vector<std::string> errors;
  {
    Section r(root, "", source, errors);
    if (r.has("seed")) {
      const YAML::Node n = r.raw("seed");
      try {
        cfg.seed = n.as<std::uint64_t>();
      } catch (const YAML::Exception&) {
        r.fail(n, "seed: expected a non-negative integer");
      }
    }
    if (r.has("duration")) {
      const YAML::Node n = r.raw("duration");
      if (n.IsScalar() && n.as<std::string>() == "auto") {
        cfg.duration.reset();
      } else {
        double d = 0.0;
        r.num("duration", d, Bound::kPositive);
        cfg.duration = d;
      }
    }
    {
      Section s = r.child("runtime");
      s.num("base_rate", cfg.base_rate, Bound::kPositive);
      s.num("takeoff_allowance", cfg.takeoff_allowance, Bound::kNonNegative);
      s.num("settle_time", cfg.settle_time, Bound::kNonNegative);
      s.num("arrival_radius", cfg.arrival_radius, Bound::kPositive);
    }
    read_nodes(r.child("nodes"), cfg);
    {
      Section s = r.child("vehicle");
      sim::VehicleParams& v = cfg.vehicle;
      s.num("mass", v.mass, Bound::kPositive);
      s.vec3("inertia", v.inertia, Bound::kPositive);
      s.num("arm_length", v.arm_length, Bound::kPositive);
      s.num("motor_max_thrust", v.motor_max_thrust, Bound::kPositive);
      s.num("torque_coeff", v.torque_coeff, Bound::kPositive);
      s.vec3("drag", v.drag, Bound::kNonNegative);
      s.num("motor_time_constant", v.motor_time_constant, Bound::kNonNegative);
      s.flag("ground", v.ground);
    }
    {
      Section s = r.child("environment");
      s.vec3("wind_ned", cfg.wind);
      Section h = s.child("home");
      h.num("lat_deg", cfg.sensors.home.lat, Bound::kAny, Unit::kDegrees);
      h.num("lon_deg", cfg.sensors.home.lon, Bound::kAny, Unit::kDegrees);
      h.num("alt_m", cfg.sensors.home.alt);
      s.num("declination_deg", cfg.sensors.declination, Bound::kAny, Unit::kDegrees);
      s.num("inclination_deg", cfg.sensors.inclination, Bound::kAny, Unit::kDegrees);
    }
    {
      Section s = r.child("sensors");
      sim::SensorConfig& c = cfg.sensors;
      Section rates = s.child("rates");
      rates.num("imu", c.imu_rate, Bound::kPositive);
      rates.num("baro", c.baro_rate, Bound::kPositive);
      rates.num("mag", c.mag_rate, Bound::kPositive);
      rates.num("gnss", c.gnss_rate, Bound::kPositive);
      Section noise = s.child("noise");
      noise.num("accel", c.accel_sigma, Bound::kNonNegative);
      noise.num("gyro", c.gyro_sigma, Bound::kNonNegative);
      noise.num("baro", c.baro_sigma, Bound::kNonNegative);
      noise.num("mag", c.mag_sigma, Bound::kNonNegative);
      noise.num("gnss_position", c.gnss_pos_sigma, Bound::kNonNegative);
      noise.num("gnss_velocity", c.gnss_vel_sigma, Bound::kNonNegative);
      Section bias = s.child("bias");
      bias.vec3("accel", c.accel_bias);
      bias.vec3("gyro", c.gyro_bias);
      bias.num("baro", c.baro_bias);
      s.num("truth_rate", cfg.truth_rate, Bound::kPositive);
    }
    read_estimator(r.child("estimator"), cfg);
    {
      Section s = r.child("navigation");
      nav::ManagerConfig& m = cfg.navigation.manager;
      s.num("min_leg_time", m.t_min, Bound::kPositive);
      Section t = s.child("takeoff");
      t.flag("enabled", m.takeoff);
      t.num("altitude", m.takeoff_altitude, Bound::kPositive);
      t.num("tolerance", m.takeoff_tolerance, Bound::kPositive);
      t.num("speed_tolerance", m.takeoff_speed_tolerance, Bound::kPositive);
      Section f = s.child("follower");
      nav::FollowerGains& g = cfg.navigation.follower;
      f.vec3("kp", g.kp, Bound::kNonNegative);
      f.vec3("kd", g.kd, Bound::kNonNegative);
      f.vec3("ki", g.ki, Bound::kNonNegative);
      f.num("i_limit", g.i_limit, Bound::kNonNegative);
      f.num("k_yaw", g.k_yaw, Bound::kNonNegative);
      f.num("min_force", g.min_force, Bound::kPositive);
      f.num("min_thrust_fraction", g.min_thrust_fraction, Bound::kNonNegative);
      f.num("takeoff_climb_rate", g.takeoff_climb_rate, Bound::kPositive);
      f.num("takeoff_kp", g.takeoff_kp, Bound::kPositive);
    }
    {
      Section s = r.child("controller");
      ctrl::GainSet& g = cfg.controller;
      s.num("mass", g.mass, Bound::kPositive);
      s.num("max_thrust", g.max_thrust, Bound::kPositive);
      s.num("tilt_limit_deg", g.tilt_limit, Bound::kPositive, Unit::kDegrees);
      s.num("stale_timeout", g.stale_timeout, Bound::kPositive);
      s.num("failsafe_throttle_scale", g.failsafe_throttle_scale, Bound::kNonNegative);
      Section loops = s.child("loops");
      read_pid(loops.child("pos_n"), g.pos_n);
      read_pid(loops.child("pos_e"), g.pos_e);
      read_pid(loops.child("pos_d"), g.pos_d);
      read_pid(loops.child("vel_n"), g.vel_n);
      read_pid(loops.child("vel_e"), g.vel_e);
      read_pid(loops.child("vel_d"), g.vel_d);
      read_pid(loops.child("yaw"), g.yaw);
      read_pid(loops.child("roll"), g.roll);
      read_pid(loops.child("pitch"), g.pitch);
      read_pid(loops.child("roll_rate"), g.roll_rate);
      read_pid(loops.child("pitch_rate"), g.pitch_rate);
      read_pid(loops.child("yaw_rate"), g.yaw_rate);
    }
    {
      Section s = r.child("firmware");
      Section loops = s.child("loops");
      read_pid(loops.child("roll"), cfg.firmware.roll);
      read_pid(loops.child("pitch"), cfg.firmware.pitch);
      read_pid(loops.child("roll_rate"), cfg.firmware.roll_rate);
      read_pid(loops.child("pitch_rate"), cfg.firmware.pitch_rate);
      read_pid(loops.child("yaw_rate"), cfg.firmware.yaw_rate);
    }
    {
      const YAML::Node list = r.raw("param_updates");
      if (list && !list.IsNull()) {
        if (!list.IsSequence()) {
          r.fail(list, "param_updates: expected a list");
        } else {
          for (std::size_t i = 0; i < list.size(); ++i) {
            Section u(list[i], "param_updates[" + std::to_string(i) + "]", source, errors);
            rt::ParamUpdate p;
            for (const char* req : {"t", "role", "key", "value"})
              if (!u.has(req)) u.fail_here(u.name(req) + ": required");
            u.num("t", p.t, Bound::kNonNegative);
            u.text("role", p.role);
            u.text("key", p.key);
            u.num("value", p.value);
            if (u.has("role") && !rt::is_role(p.role)) u.fail(u.raw("role"), u.name("role") + ": unknown role '" + p.role + "'");
            cfg.param_updates.push_back(p);
          }
        }
      }
    }
  }

  est::EkfConfig& e = cfg.estimator.ekf;
  e.declination = cfg.sensors.declination;
  if (cfg.estimator.origin == OriginMode::kHome) {
    e.origin = est::GeoOrigin{cfg.sensors.home.lat, cfg.sensors.home.lon, cfg.sensors.home.alt};
  } else {
    e.origin.reset();
  }
  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

StackConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.string());
}

MissionSpec parse_mission(const std::string& text, const sim::HomeLocation& home, const std::string& source) {
  const YAML::Node root = parse_yaml(text, source);
  std::vector<std::string> errors;
  MissionSpec m;
  {
    Section r(root, "", source, errors);
    if (!r.has("v_max")) r.fail_here("v_max: required");
    r.num("v_max", m.v_max, Bound::kPositive);
    est::GeoOrigin origin{home.lat, home.lon, home.alt};
    {
      Section o = r.child("origin");
      o.num("lat_deg", origin.lat, Bound::kAny, Unit::kDegrees);
      o.num("lon_deg", origin.lon, Bound::kAny, Unit::kDegrees);
      o.num("alt_m", origin.alt);
    }
    const YAML::Node list = r.raw("waypoints");
    if (!list || !list.IsSequence() || list.size() == 0) {
      r.fail(list ? list : root, "waypoints: expected a non-empty list");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i) {
        Section w(list[i], "waypoints[" + std::to_string(i) + "]", source, errors);
        nav::Waypoint wp;
        double heading = 0.0;
        w.num("heading_deg", heading);
        wp.heading = wrap_angle(deg2rad(heading));
        const bool ned = w.has("n") || w.has("e") || w.has("d");
        const bool lla = w.has("lat_deg") || w.has("lon_deg") || w.has("alt_m");
        if (ned == lla) {
          w.fail_here(w.path() + ": needs either n/e/d or lat_deg/lon_deg/alt_m");
          continue;
        }
        if (ned) {
          for (const char* k : {"n", "e", "d"})
            if (!w.has(k)) w.fail_here(w.name(k) + ": required");
          w.num("n", wp.p.x());
          w.num("e", wp.p.y());
          w.num("d", wp.p.z());
        } else {
          for (const char* k : {"lat_deg", "lon_deg", "alt_m"})
            if (!w.has(k)) w.fail_here(w.name(k) + ": required");
          double lat = 0, lon = 0, alt = 0;
          w.num("lat_deg", lat);
          w.num("lon_deg", lon);
          w.num("alt_m", alt);
          const est::LocalNE ne = est::gnss_to_local(deg2rad(lat), deg2rad(lon), origin);
          // Waypoints are relative to home; the mission origin may differ.
          const est::LocalNE shift =
              est::gnss_to_local(origin.lat, origin.lon, est::GeoOrigin{home.lat, home.lon, home.alt});
          wp.p = Vec3(ne.north + shift.north, ne.east + shift.east, -(alt - home.alt));
        }
        m.waypoints.push_back(wp);
      }
    }
  }
  if (!errors.empty()) throw ConfigError(errors);
  return m;
}

MissionSpec load_mission(const std::filesystem::path& path, const sim::HomeLocation& home) {
  return parse_mission(read_file(path), home, path.string());
}

std::vector<std::string> sanity_check(const StackConfig& cfg, const MissionSpec* mission) {
  std::vector<std::string> out;
  const sim::VehicleParams& v = cfg.vehicle;
  if (v.max_total_thrust() < 1.5 * v.mass * kGravity) {
    out.push_back("vehicle: hover margin too small (4 x motor_max_thrust = " + std::to_string(v.max_total_thrust()) +
                  " N < 1.5 m g = " + std::to_string(1.5 * v.mass * kGravity) + " N)");
  }
  if (cfg.controller.tilt_limit >= kPi / 2 - cfg.estimator.ekf.gimbal_guard) {
    out.push_back("controller.tilt_limit_deg: must stay below 90 degrees");
  }
  if (cfg.sensors.home.alt < 0.0 || cfg.sensors.home.alt >= 11000.0) {
    out.push_back("environment.home.alt_m: outside the troposphere model [0, 11000)");
  }
  if (std::abs(cfg.sensors.home.lat) >= deg2rad(89.0)) out.push_back("environment.home.lat_deg: too close to a pole");
  if (std::abs(std::cos(cfg.sensors.inclination)) < 1e-3) {
    out.push_back("environment.inclination_deg: field is vertical, heading unobservable");
  }
  std::set<std::string> roles;
  for (const auto& d : cfg.nodes) {
    if (!roles.insert(d.role).second) out.push_back("nodes." + d.role + ": bound twice");
  }
  const auto sim_it = std::find_if(cfg.nodes.begin(), cfg.nodes.end(), [](const auto& d) { return d.role == "sim"; });
  if (sim_it != cfg.nodes.end() && sim_it->rate > cfg.base_rate) {
    out.push_back("nodes.sim.rate: cannot exceed runtime.base_rate");
  }
  if (mission) {
    if (!(mission->v_max > 0.0)) out.push_back("mission: v_max must be > 0");
    for (std::size_t i = 0; i < mission->waypoints.size(); ++i) {
      const nav::Waypoint& w = mission->waypoints[i];
      if (!w.p.allFinite() || !std::isfinite(w.heading)) {
        out.push_back("mission: waypoint " + std::to_string(i) + " is not finite");
      } else if (w.p.z() > 0.0) {
        out.push_back("mission: waypoint " + std::to_string(i) + " is below the ground (d > 0)");
      }
    }
    // Peak smoothstep acceleration 10/sqrt(3) |dp| / T^2 must be reachable within the tilt limit.
    const double a_lat = kGravity * std::tan(cfg.controller.tilt_limit);
    std::vector<nav::Waypoint> chain = mission->waypoints;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      if (!chain[i].p.allFinite() || !chain[i + 1].p.allFinite() || !(mission->v_max > 0.0)) continue;
      const double dist = (chain[i + 1].p - chain[i].p).norm();
      const double T = nav::leg_duration(chain[i], chain[i + 1], mission->v_max, cfg.navigation.manager.t_min);
      const double a_peak = 10.0 / std::sqrt(3.0) * dist / (T * T);
      if (a_peak > a_lat) {
        out.push_back("mission: leg " + std::to_string(i) + " needs " + std::to_string(a_peak) +
                      " m/s^2, beyond the tilt limit (" + std::to_string(a_lat) + " m/s^2)");
      }
    }
  }
  return out;
}

double auto_duration(const StackConfig& cfg, const MissionSpec& mission) {
  nav::PathManager pm(cfg.navigation.manager);
  pm.set_mission(mission.waypoints, mission.v_max);
  const double takeoff = cfg.navigation.manager.takeoff ? cfg.takeoff_allowance : 0.0;
  return takeoff + pm.total_leg_time() + cfg.settle_time;
}

}  // namespace rotor::app
