// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "rotor/app/commands.hpp"
#include "rotor/app/metrics.hpp"
#include "rotor/app/nodes.hpp"
#include "rotor/controller/cascade.hpp"
#include "rotor/estimator/ekf.hpp"
#include "rotor/navigation/follower.hpp"
#include "rotor/navigation/trajectory.hpp"
#include "rotor/sim/vehicle.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace rotor;
namespace fs = std::filesystem;

namespace {

const char* kMission = R"(v_max: 3.0
waypoints:
  - {n: 0.0,   e: 0.0,  d: -5.0, heading_deg: 130}
  - {n: -20.0, e: 0.0,  d: -8.0, heading_deg: 130}
  - {n: -20.0, e: 20.0, d: -5.0, heading_deg: 130}
)";

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path workdir() {
  static const fs::path dir = [] {
    const fs::path p = fs::temp_directory_path() / "rotor_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

struct MissionRun {
  int code = -1;
  double wall = 0.0;
  fs::path log;
  std::map<std::string, std::string> summary;
};

// The stock configuration is the one with no overrides.
MissionRun run_mission(const std::string& name, const std::string& config_text) {
  const fs::path dir = workdir() / name;
  fs::create_directories(dir);
  std::ofstream(dir / "config.yaml") << config_text;
  std::ofstream(dir / "mission.yaml") << kMission;
  app::SimRunOptions o;
  o.config = dir / "config.yaml";
  o.mission = dir / "mission.yaml";
  o.out = dir / "log";
  std::ostringstream out, err;
  MissionRun r;
  const auto t0 = std::chrono::steady_clock::now();
  r.code = app::sim_run(o, out, err);
  r.wall = seconds_since(t0);
  r.log = o.out;
  if (fs::exists(o.out / "summary.kv")) r.summary = app::read_summary_kv(o.out / "summary.kv");
  return r;
}

const MissionRun& default_run() {
  static const MissionRun r = run_mission("default", "{}\n");
  return r;
}

double num(const MissionRun& r, const std::string& key) {
  auto it = r.summary.find(key);
  return it == r.summary.end() ? std::nan("") : std::stod(it->second);
}

Verdict ac1() {
  const MissionRun& r = default_run();
  const double rmse = num(r, "path_rmse_m");
  const bool complete = r.code == app::kExitOk && r.summary.count("mission_complete") &&
                        r.summary.at("mission_complete") == "true";
  return {complete && rmse <= 0.6 && r.wall < 60.0,
          fmt("mission_complete=%s path_rmse=%.4f m (<= 0.6) wall=%.2f s (< 60)", complete ? "true" : "false", rmse,
              r.wall)};
}

Verdict ac2() {
  const MissionRun& r = default_run();
  const double p = num(r, "est_pos_rms_m"), v = num(r, "est_vel_rms_mps"), a = num(r, "est_att_rms_deg");
  return {p <= 2.0 && v <= 0.05 && a <= 0.5,
          fmt("pos=%.4f m (<= 2.0) vel=%.4f m/s (<= 0.05) att=%.4f deg (<= 0.5)", p, v, a)};
}

struct StateSampler {
  std::mt19937_64 rng;
  explicit StateSampler(unsigned seed) : rng(seed) {}
  double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  Vec3 vec(double s) { return {uni(-s, s), uni(-s, s), uni(-s, s)}; }
  est::StateVector state() {
    est::StateVector x;
    x.p = vec(50);
    x.v = vec(5);
    x.att = {uni(-1.2, 1.2), uni(-1.0, 1.0), uni(-kPi, kPi)};
    x.gyro_bias = vec(0.05);
    return x;
  }
};

Verdict ac3() {
  const auto t0 = std::chrono::steady_clock::now();
  StateSampler s(2024);
  double worst_a = 0, worst_baro = 0, worst_gnss = 0, worst_f = 0, worst_g = 0;
  const double rho = est::air_density(1387.0);
  for (int i = 0; i < 100; ++i) {
    const est::StateVector x = s.state();
    const Eigen::VectorXd xv = x.to_vec();
    est::ImuInput u;
    u.accel = s.vec(3) + Vec3(0, 0, -kGravity);
    u.gyro = s.vec(1.5);

    const auto f = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
      return est::dynamics(est::StateVector::from_vec(z), u);
    };
    worst_a = std::max(worst_a, oracle::rel_err(est::jacobian_state(x, u), oracle::numeric_jacobian(f, xv)));

    const auto hb = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
      Eigen::VectorXd out(1);
      out << est::baro_model(est::StateVector::from_vec(z), rho);
      return out;
    };
    worst_baro = std::max(worst_baro, oracle::rel_err(est::baro_jacobian(rho), oracle::numeric_jacobian(hb, xv)));

    const auto hg = [](const Eigen::VectorXd& z) -> Eigen::VectorXd {
      return est::gnss_model(est::StateVector::from_vec(z));
    };
    worst_gnss = std::max(worst_gnss, oracle::rel_err(est::gnss_jacobian(x), oracle::numeric_jacobian(hg, xv)));

    // Magnetometer heading about a level-ish attitude with a random field.
    const EulerAngles att{s.uni(-0.8, 0.8), s.uni(-0.8, 0.8), s.uni(-3, 3)};
    const double incl = s.uni(-1.2, 1.2), decl = s.uni(-3, 3);
    const Vec3 m_i(std::cos(incl) * std::cos(decl), std::cos(incl) * std::sin(decl), std::sin(incl));
    const Vec3 m_b = oracle::rot_zyx(att.roll, att.pitch, att.yaw).transpose() * m_i * s.uni(0.2, 2.0);
    const auto J = est::mag_heading_jacobians(m_b, att);
    const auto fm = [&](const Eigen::VectorXd& m) -> Eigen::VectorXd {
      Eigen::VectorXd out(1);
      out << est::mag_heading(m, att);
      return out;
    };
    worst_f = std::max(worst_f, oracle::rel_err(J.F, oracle::numeric_jacobian(fm, m_b)));
    est::StateVector xa;
    xa.att = att;
    const auto fx = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
      Eigen::VectorXd out(1);
      out << est::mag_heading(m_b, est::StateVector::from_vec(z).att);
      return out;
    };
    worst_g = std::max(worst_g, oracle::rel_err(J.G, oracle::numeric_jacobian(fx, xa.to_vec())));
  }
  const double wall = seconds_since(t0);
  const double worst = std::max({worst_a, worst_baro, worst_gnss, worst_f, worst_g});
  return {worst <= 1e-5 && wall < 5.0,
          fmt("A=%.2e C_baro=%.2e C_gnss=%.2e mag_F=%.2e mag_G=%.2e (<= 1e-5) time=%.3f s (< 5)", worst_a, worst_baro,
              worst_gnss, worst_f, worst_g, wall)};
}

Verdict ac4() {
  // A hovering vehicle observed through noisy sensors; each cycle is one
  // propagation plus one randomly chosen measurement update.
  const app::StackConfig cfg = app::default_config();
  est::EkfConfig ec = cfg.estimator.ekf;
  ec.origin = est::GeoOrigin{cfg.sensors.home.lat, cfg.sensors.home.lon, cfg.sensors.home.alt};
  est::Ekf ekf(ec);
  std::mt19937_64 rng(44);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 2);
  const double rho = est::air_density(cfg.sensors.home.alt);
  const Vec3 m_i = sim::magnetic_field_ned(0.0, cfg.sensors.inclination);
  const Vec3 p_true(3.0, -2.0, -10.0);
  double asym = 0.0, min_eig = 1e300;
  for (int k = 0; k < 10000; ++k) {
    const double t = k * 0.004;
    est::ImuInput u;
    u.stamp = t;
    u.accel = Vec3(0, 0, -kGravity) + 0.25 * Vec3(n01(rng), n01(rng), n01(rng));
    u.gyro = 0.005 * Vec3(n01(rng), n01(rng), n01(rng));
    ekf.propagate(u);
    switch (pick(rng)) {
      case 0:
        ekf.update_baro({t, rho * kGravity * -p_true.z() + 3.0 * n01(rng)});
        break;
      case 1:
        ekf.update_mag({t, m_i + 0.005 * Vec3(n01(rng), n01(rng), n01(rng))});
        break;
      default: {
        const auto [lat, lon] = est::local_to_gnss(p_true.x() + 0.4 * n01(rng), p_true.y() + 0.4 * n01(rng), *ec.origin);
        ekf.update_gnss({t, lat, lon, cfg.sensors.home.alt - p_true.z(), 0.05 * Vec3(n01(rng), n01(rng), n01(rng))});
      }
    }
    const est::StateMat& P = ekf.belief().P;
    asym = std::max(asym, (P - P.transpose()).cwiseAbs().rowwise().sum().maxCoeff());
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<est::StateMat>(P).eigenvalues().minCoeff());
  }
  const bool ok = !ekf.faulted() && asym <= 1e-9 && min_eig >= -1e-9;
  return {ok, fmt("cycles=10000 |P-P^T|inf=%.2e (<= 1e-9) min_eig=%.3e (>= -1e-9) faulted=%s", asym, min_eig,
                  ekf.faulted() ? "true" : "false")};
}

Verdict ac5() {
  // Small integers and dyadic fractions keep every product and sum exact.
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> small(-4, 4);
  int mismatches = 0, trials = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 5;
    const double scale = (trial % 2) ? 0.125 : 1.0;
    Eigen::MatrixXd L(12, 12), C(m, 12), Lr(m, m);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) L(i, j) = small(rng) * scale;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 12; ++j) C(i, j) = small(rng) * scale;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) Lr(i, j) = small(rng) * scale;
    const Eigen::MatrixXd P = L * L.transpose();
    const Eigen::MatrixXd R = Lr * Lr.transpose();

    // R + C P C^T by explicit loops.
    Eigen::MatrixXd expect = R;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int a = 0; a < 12; ++a)
          for (int b = 0; b < 12; ++b) expect(i, j) += C(i, a) * P(a, b) * C(j, b);

    const Eigen::MatrixXd S = est::innovation_covariance_full(Eigen::MatrixXd::Identity(m, m), R,
                                                              Eigen::MatrixXd::Zero(m, 12), P, C);
    ++trials;
    if (S.rows() != m || S.cols() != m || std::memcmp(S.data(), expect.data(), sizeof(double) * m * m) != 0) {
      ++mismatches;
    }
  }
  return {mismatches == 0, fmt("bitwise matches %d/%d", trials - mismatches, trials)};
}

// 10t^3 - 15t^4 + 6t^5 and its first two derivatives, written out directly.
double poly(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double poly_d1(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }

Verdict ac6() {
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> pos(-100, 100), hd(-kPi, kPi), vm(0.5, 10);
  int boundary_fail = 0, shape_fail = 0;
  double worst_excess = -1e300;
  const Smoothstep s0 = quintic_smoothstep(0.0), s1 = quintic_smoothstep(1.0);
  if (!(s0.value == 0.0 && s1.value == 1.0 && s0.d1 == 0.0 && s1.d1 == 0.0 && s0.d2 == 0.0 && s1.d2 == 0.0)) {
    ++boundary_fail;
  }
  for (int i = 0; i < 100; ++i) {
    const nav::Waypoint a{Vec3(pos(rng), pos(rng), pos(rng)), hd(rng)};
    const nav::Waypoint b{Vec3(pos(rng), pos(rng), pos(rng)), hd(rng)};
    const double v_max = vm(rng);
    const nav::WaypointLeg leg = nav::make_leg(a, b, v_max);
    const auto start = nav::sample_trajectory(leg, 0.0), end = nav::sample_trajectory(leg, leg.duration);
    if (!(start.p == a.p && end.p == b.p && start.v.isZero(0) && end.v.isZero(0) && start.a.isZero(0) &&
          end.a.isZero(0))) {
      ++boundary_fail;
    }
    double peak = 0.0;
    for (int k = 0; k <= 2000; ++k) peak = std::max(peak, nav::sample_trajectory(leg, leg.duration * k / 2000).v.norm());
    // The analytic peak is at the midpoint.
    peak = std::max(peak, poly_d1(0.5) / leg.duration * (b.p - a.p).norm());
    worst_excess = std::max(worst_excess, peak - v_max);
    const double tau = 0.29;
    const auto mid = nav::sample_trajectory(leg, tau * leg.duration);
    if ((mid.p - (a.p + poly(tau) * (b.p - a.p))).norm() > 1e-9) ++shape_fail;
  }
  return {boundary_fail == 0 && shape_fail == 0 && worst_excess <= 1e-9,
          fmt("legs=100 boundary_failures=%d shape_failures=%d max(peak-v_max)=%.3e (<= 1e-9)", boundary_fail,
              shape_fail, worst_excess)};
}

Verdict ac7() {
  const double mass = 2.0;
  int exact_fail = 0;
  nav::TrajectoryFollower follower({}, mass);
  for (double yaw : {0.0, 0.7, -2.2, kPi}) {
    est::StateVector x;
    x.p = Vec3(4, -3, -6);
    x.att.yaw = yaw;
    nav::TrajectorySetpoint sp;
    sp.p = x.p;
    sp.yaw = yaw;
    const nav::AngleThrustSetpoint out = follower.follow(sp, x, 0.01);
    if (!(out.roll == 0.0 && out.pitch == 0.0 && out.thrust == mass * kGravity)) ++exact_fail;
  }
  sim::VehicleParams p;
  p.ground = false;
  sim::TruthState x;
  x.p = Vec3(0, 0, -5);
  const Vec3 start = x.p;
  const sim::MotorThrusts hover = sim::mix(p.mass * kGravity, 0, 0, 0, p).thrusts;
  for (int i = 0; i < 10000; ++i) x = sim::step_dynamics(x, hover, Vec3::Zero(), p, 0.001);
  const double drift = (x.p - start).norm();
  return {exact_fail == 0 && drift < 1e-3,
          fmt("zero-error outputs exact: %s, hover drift over 10 s=%.3e m (< 1e-3)", exact_fail ? "no" : "yes", drift)};
}

Verdict ac8() {
  ctrl::Cascade cascade;
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  int kind_fail = 0, layout_fail = 0, pass_fail = 0;
  const ctrl::FirmwareKind expected[ctrl::kModeCount] = {
      ctrl::FirmwareKind::kAngle, ctrl::FirmwareKind::kAngle, ctrl::FirmwareKind::kAngle,
      ctrl::FirmwareKind::kAngle, ctrl::FirmwareKind::kAngle, ctrl::FirmwareKind::kAngle,
      ctrl::FirmwareKind::kAngle, ctrl::FirmwareKind::kRate,  ctrl::FirmwareKind::kPassThrough,
      ctrl::FirmwareKind::kPassThrough, ctrl::FirmwareKind::kPassThrough, ctrl::FirmwareKind::kPassThrough};
  for (int mode = 0; mode < ctrl::kModeCount; ++mode) {
    for (int trial = 0; trial < 20; ++trial) {
      ctrl::ControlCommand cmd{0.0, mode, {u(rng), u(rng), u(rng), 0.5 + u(rng)}};
      ctrl::EstimateView est;
      const ctrl::FirmwareCommand out = cascade.route(cmd, est, 0.0, 0.01);
      if (out.kind != expected[mode]) ++kind_fail;
      for (int slot : {0, 1, 6, 7, 8, 9})
        if (out.u[slot] != 0.0) ++layout_fail;
      if (mode == 8)
        for (int i = 0; i < 4; ++i)
          if (std::memcmp(&out.u[2 + i], &cmd.values[i], sizeof(double)) != 0) ++pass_fail;
    }
  }
  return {kind_fail == 0 && layout_fail == 0 && pass_fail == 0,
          fmt("modes=12 kind_mismatches=%d nonzero_reserved_slots=%d mode8_value_mismatches=%d", kind_fail,
              layout_fail, pass_fail)};
}

Verdict ac9() {
  // Zero-noise, zero-bias flight; every sensor message is checked against the
  // estimator's measurement model evaluated at the truth of the same tick.
  app::StackConfig cfg = app::default_config();
  cfg.sensors.accel_sigma = cfg.sensors.gyro_sigma = cfg.sensors.baro_sigma = 0.0;
  cfg.sensors.mag_sigma = cfg.sensors.gnss_pos_sigma = cfg.sensors.gnss_vel_sigma = 0.0;
  cfg.sensors.gyro_bias.setZero();
  cfg.sensors.accel_bias.setZero();
  cfg.sensors.baro_bias = 0.0;
  cfg.sensors.declination = deg2rad(11.5);
  cfg.estimator.ekf.declination = cfg.sensors.declination;
  const app::MissionSpec mission = app::parse_mission(kMission, cfg.sensors.home, "mission");

  rt::Subscription<rt::TruthMsg> truth_sub;
  rt::Subscription<rt::BaroMsg> baro_sub;
  rt::Subscription<rt::MagMsg> mag_sub;
  rt::Subscription<rt::GnssMsg> gnss_sub;
  app::StackHooks hooks;
  hooks.before_bind = [&](rt::Registry& reg) {
    truth_sub = reg.bus().subscribe<rt::TruthMsg>(rt::topics::kSimState);
    baro_sub = reg.bus().subscribe<rt::BaroMsg>(rt::topics::kBaro);
    mag_sub = reg.bus().subscribe<rt::MagMsg>(rt::topics::kMag);
    gnss_sub = reg.bus().subscribe<rt::GnssMsg>(rt::topics::kGnss);
  };
  const rt::RunReport report = app::run_stack(cfg, mission, std::nullopt, 20.0, hooks);

  std::map<double, rt::TruthMsg> truth;
  for (auto& m : truth_sub.drain()) truth.emplace(m.stamp, m);
  const est::GeoOrigin origin{cfg.sensors.home.lat, cfg.sensors.home.lon, cfg.sensors.home.alt};
  const double rho = est::air_density(cfg.sensors.home.alt);
  auto state_at = [&](double stamp) {
    const rt::TruthMsg& t = truth.at(stamp);
    est::StateVector x;
    x.p = t.p;
    x.v = t.v_b;
    x.att = t.att;
    return x;
  };
  double worst_baro = 0, worst_mag = 0, worst_gnss = 0;
  std::size_t nb = 0, nm = 0, ng = 0;
  for (const auto& m : baro_sub.drain()) {
    worst_baro = std::max(worst_baro, std::abs(m.pressure - est::baro_model(state_at(m.stamp), rho)));
    ++nb;
  }
  for (const auto& m : mag_sub.drain()) {
    const est::StateVector x = state_at(m.stamp);
    worst_mag = std::max(worst_mag,
                         std::abs(wrap_angle(est::mag_heading(m.field, x.att, cfg.sensors.declination) - x.att.yaw)));
    ++nm;
  }
  for (const auto& m : gnss_sub.drain()) {
    worst_gnss = std::max(
        worst_gnss,
        (est::gnss_measurement_vector(m, origin) - est::gnss_model(state_at(m.stamp))).cwiseAbs().maxCoeff());
    ++ng;
  }
  const bool ok = !report.failsafe && nb > 0 && nm > 0 && ng > 0 && worst_baro <= 1e-9 && worst_mag <= 1e-9 &&
                  worst_gnss <= 1e-9;
  return {ok, fmt("baro=%.2e (%zu) mag=%.2e (%zu) gnss=%.2e (%zu), all <= 1e-9", worst_baro, nb, worst_mag, nm,
                  worst_gnss, ng)};
}

Verdict ac10() {
  const MissionRun& a = default_run();
  const MissionRun b = run_mission("default_again", "{}\n");
  int differing = 0, files = 0;
  for (const auto& entry : fs::directory_iterator(a.log)) {
    ++files;
    if (slurp(entry.path()) != slurp(b.log / entry.path().filename())) ++differing;
  }

  app::ReplayOptions o;
  o.log = a.log;
  o.config = a.log / "config.yaml";
  o.out = workdir() / "replay";
  std::ostringstream out, err;
  const int code = app::replay_estimator(o, out, err);
  std::size_t compared = 0, mismatched = 0;
  bool same_count = false;
  if (code == app::kExitOk) {
    const auto live = rt::read_topic<rt::EstimateMsg>(a.log, rt::read_manifest(a.log), rt::topics::kEstimate).messages;
    const auto again = rt::read_topic<rt::EstimateMsg>(o.out, rt::read_manifest(o.out), app::kReplayTopic).messages;
    same_count = live.size() == again.size();
    for (std::size_t i = 0; i < std::min(live.size(), again.size()); ++i) {
      std::vector<double> x, y;
      rt::MessageTraits<rt::EstimateMsg>::flatten(live[i], x);
      rt::MessageTraits<rt::EstimateMsg>::flatten(again[i], y);
      ++compared;
      if (x.size() != y.size() || std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) != 0) ++mismatched;
    }
  }
  const bool ok = differing == 0 && files > 0 && code == app::kExitOk && same_count && compared > 0 && mismatched == 0;
  return {ok, fmt("same-seed files differing=%d/%d, replay estimates bit-identical=%zu/%zu", differing, files,
                  compared - mismatched, compared)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> checks[] = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
  int failed = 0;
  for (const auto& [name, check] : checks) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << name << " " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << std::endl;
    failed += !v.pass;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " failing" : std::string("acceptance: all pass"))
            << std::endl;
  return failed ? 1 : 0;
}
