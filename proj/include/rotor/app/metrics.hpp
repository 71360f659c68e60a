#pragma once

#include "rotor/app/config.hpp"
#include "rotor/runtime/messages.hpp"
#include "rotor/runtime/scheduler.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rotor::app {

/// Distance from p to the segment [a, b].
double distance_to_segment(const Vec3& p, const Vec3& a, const Vec3& b);

struct MissionMetrics {
  int path_samples = 0;
  double path_rmse = 0.0;        // estimated position vs the straight leg, m
  double path_rmse_truth = 0.0;  // true position vs the straight leg, m (truth logged)
  bool truth_available = false;
  std::vector<std::optional<double>> arrival_times;  // per waypoint, s
  bool all_reached = false;
  bool reached_hold = false;  // manager finished every leg
};

/// Arrival uses the estimated position and `radius`. The path error is taken
/// over samples where the most recent setpoint is in the leg phase.
MissionMetrics mission_metrics(const std::vector<rt::EstimateMsg>& estimates,
                               const std::vector<rt::SetpointMsg>& setpoints,
                               const std::vector<rt::TruthMsg>* truth, const MissionSpec& mission, double radius);

struct EstimatorStats {
  bool available = false;
  int samples = 0;
  double pos_rms = 0.0;      // m, norm of the position error
  double vel_rms = 0.0;      // m/s, norm of the body-velocity error
  double att_rms_deg = 0.0;  // deg, norm of (roll, pitch, wrapped yaw) error
  Vec3 pos_rms_axis = Vec3::Zero();
  Vec3 vel_rms_axis = Vec3::Zero();
  Vec3 att_rms_axis_deg = Vec3::Zero();
  std::optional<double> bias_rms;  // rad/s, needs the true bias
};

/// Pairs estimates with truth samples of identical stamp.
EstimatorStats estimator_stats(const std::vector<rt::EstimateMsg>& estimates, const std::vector<rt::TruthMsg>& truth,
                               const std::optional<Vec3>& true_gyro_bias = std::nullopt);

/// Ordered key/value report; written as summary.kv and summary.txt.
class Summary {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, bool value);
  void set_int(const std::string& key, long long value);
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::optional<std::string> get(const std::string& key) const;

  std::string kv_text() const;
  void write(const std::filesystem::path& dir, const std::string& title) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Parses a summary.kv file.
std::map<std::string, std::string> read_summary_kv(const std::filesystem::path& file);

void add_mission_metrics(Summary& s, const MissionMetrics& m);
void add_estimator_stats(Summary& s, const EstimatorStats& e);
void add_run_report(Summary& s, const rt::RunReport& r);

}  // namespace rotor::app
