#include "rotor/app/metrics.hpp"

#include "rotor/runtime/log.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

namespace rotor::app {

double distance_to_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

MissionMetrics mission_metrics(const std::vector<rt::EstimateMsg>& estimates,
                               const std::vector<rt::SetpointMsg>& setpoints,
                               const std::vector<rt::TruthMsg>* truth, const MissionSpec& mission, double radius) {
  MissionMetrics m;
  m.arrival_times.assign(mission.waypoints.size(), std::nullopt);
  std::unordered_map<double, const rt::TruthMsg*> truth_at;
  if (truth) {
    for (const auto& t : *truth) truth_at.emplace(t.stamp, &t);
  }

  double sum = 0.0, sum_truth = 0.0;
  int truth_samples = 0;
  std::size_t sp = 0, next_wp = 0;
  for (const auto& e : estimates) {
    while (sp < setpoints.size() && setpoints[sp].stamp <= e.stamp) ++sp;
    if (sp > 0 && setpoints[sp - 1].phase == 1) {
      const rt::SetpointMsg& s = setpoints[sp - 1];
      const double d = distance_to_segment(e.x.p, s.leg_start.p, s.leg_end.p);
      sum += d * d;
      ++m.path_samples;
      const auto it = truth_at.find(e.stamp);
      if (it != truth_at.end()) {
        const double dt = distance_to_segment(it->second->p, s.leg_start.p, s.leg_end.p);
        sum_truth += dt * dt;
        ++truth_samples;
      }
    }
    if (next_wp < mission.waypoints.size() && (e.x.p - mission.waypoints[next_wp].p).norm() <= radius) {
      m.arrival_times[next_wp++] = e.stamp;
    }
  }
  if (m.path_samples > 0) m.path_rmse = std::sqrt(sum / m.path_samples);
  if (truth_samples > 0) {
    m.truth_available = true;
    m.path_rmse_truth = std::sqrt(sum_truth / truth_samples);
  }
  m.all_reached = next_wp == mission.waypoints.size();
  m.reached_hold = !setpoints.empty() && setpoints.back().phase == 2;
  return m;
}

EstimatorStats estimator_stats(const std::vector<rt::EstimateMsg>& estimates, const std::vector<rt::TruthMsg>& truth,
                               const std::optional<Vec3>& true_gyro_bias) {
  EstimatorStats s;
  std::unordered_map<double, const rt::TruthMsg*> truth_at;
  for (const auto& t : truth) truth_at.emplace(t.stamp, &t);
  Vec3 sp = Vec3::Zero(), sv = Vec3::Zero(), sa = Vec3::Zero();
  double sb = 0.0;
  for (const auto& e : estimates) {
    const auto it = truth_at.find(e.stamp);
    if (it == truth_at.end()) continue;
    const rt::TruthMsg& t = *it->second;
    const Vec3 dp = e.x.p - t.p;
    const Vec3 dv = e.x.v - t.v_b;
    const Vec3 da(wrap_angle(e.x.att.roll - t.att.roll), e.x.att.pitch - t.att.pitch,
                  wrap_angle(e.x.att.yaw - t.att.yaw));
    sp += dp.cwiseAbs2();
    sv += dv.cwiseAbs2();
    sa += da.cwiseAbs2();
    if (true_gyro_bias) sb += (e.x.gyro_bias - *true_gyro_bias).squaredNorm();
    ++s.samples;
  }
  if (s.samples == 0) return s;
  const double n = s.samples;
  s.available = true;
  s.pos_rms_axis = (sp / n).cwiseSqrt();
  s.vel_rms_axis = (sv / n).cwiseSqrt();
  s.att_rms_axis_deg = (sa / n).cwiseSqrt() * (180.0 / kPi);
  s.pos_rms = std::sqrt(sp.sum() / n);
  s.vel_rms = std::sqrt(sv.sum() / n);
  s.att_rms_deg = std::sqrt(sa.sum() / n) * (180.0 / kPi);
  if (true_gyro_bias) s.bias_rms = std::sqrt(sb / n);
  return s;
}

void Summary::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}
void Summary::set(const std::string& key, double value) { set(key, rt::format_value(value)); }
void Summary::set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
void Summary::set_int(const std::string& key, long long value) { set(key, std::to_string(value)); }

std::optional<std::string> Summary::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string Summary::kv_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

void Summary::write(const std::filesystem::path& dir, const std::string& title) const {
  std::ofstream kv(dir / "summary.kv");
  kv << kv_text();
  std::ofstream txt(dir / "summary.txt");
  txt << title << "\n" << std::string(title.size(), '=') << "\n";
  std::size_t width = 0;
  for (const auto& e : entries_) width = std::max(width, e.first.size());
  for (const auto& [k, v] : entries_) txt << k << std::string(width - k.size() + 2, ' ') << v << "\n";
}

std::map<std::string, std::string> read_summary_kv(const std::filesystem::path& file) {
  std::map<std::string, std::string> out;
  std::ifstream in(file);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

void add_mission_metrics(Summary& s, const MissionMetrics& m) {
  s.set_int("path_samples", m.path_samples);
  s.set("path_rmse_m", m.path_rmse);
  if (m.truth_available) s.set("path_rmse_truth_m", m.path_rmse_truth);
  s.set_int("waypoint_count", static_cast<long long>(m.arrival_times.size()));
  for (std::size_t i = 0; i < m.arrival_times.size(); ++i) {
    const std::string key = "waypoint_" + std::to_string(i) + "_arrival_s";
    if (m.arrival_times[i]) s.set(key, *m.arrival_times[i]);
    else s.set(key, std::string("not_reached"));
  }
  s.set("all_waypoints_reached", m.all_reached);
  s.set("mission_finished", m.reached_hold);
}

void add_estimator_stats(Summary& s, const EstimatorStats& e) {
  s.set("estimator_stats", std::string(e.available ? "available" : "unavailable"));
  if (!e.available) return;
  s.set_int("est_samples", e.samples);
  s.set("est_pos_rms_m", e.pos_rms);
  s.set("est_vel_rms_mps", e.vel_rms);
  s.set("est_att_rms_deg", e.att_rms_deg);
  const char* axes[] = {"n", "e", "d"};
  const char* body[] = {"u", "v", "w"};
  const char* angles[] = {"roll", "pitch", "yaw"};
  for (int i = 0; i < 3; ++i) s.set(std::string("est_pos_rms_") + axes[i] + "_m", e.pos_rms_axis(i));
  for (int i = 0; i < 3; ++i) s.set(std::string("est_vel_rms_") + body[i] + "_mps", e.vel_rms_axis(i));
  for (int i = 0; i < 3; ++i) s.set(std::string("est_att_rms_") + angles[i] + "_deg", e.att_rms_axis_deg(i));
  if (e.bias_rms) s.set("est_gyro_bias_rms_radps", *e.bias_rms);
}

void add_run_report(Summary& s, const rt::RunReport& r) {
  s.set("failsafe", r.failsafe);
  if (r.failsafe) {
    s.set("fault_role", r.fault_role.empty() ? std::string("runtime") : r.fault_role);
    s.set("fault_time_s", r.fault_time);
    s.set("fault_message", r.fault_message);
  }
  s.set_int("ticks", r.ticks);
  s.set("sim_end_time_s", r.end_time);
  for (const auto& [role, n] : r.executions) s.set_int("executions_" + role, n);
  s.set_int("warnings", static_cast<long long>(r.warnings.size()));
}

}  // namespace rotor::app
