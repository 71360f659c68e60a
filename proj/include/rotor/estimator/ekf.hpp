#pragma once

#include "rotor/estimator/ekf_math.hpp"
#include "rotor/estimator/measurements.hpp"
#include "rotor/estimator/types.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace rotor::est {

struct EkfConfig {
  NoiseConfig noise;
  int substeps = 4;
  NoiseScaling scaling = NoiseScaling::kPrinted;
  StateVec P0_diag = (StateVec() << 5, 5, 5, 1, 1, 1, 0.05, 0.05, 0.05, 1e-4, 1e-4, 1e-4).finished();
  double declination = 0.0;  // rad
  std::optional<GeoOrigin> origin;
  double gimbal_guard = kDefaultGimbalGuard;
  // Mahalanobis gates (chi-square thresholds); 0 disables.
  double gate_baro = 0.0;
  double gate_mag = 0.0;
  double gate_gnss = 0.0;
};

using SensorEvent = std::variant<ImuInput, BaroMeasurement, MagMeasurement, GnssMeasurement>;

double event_stamp(const SensorEvent& e);
/// Processing order for events sharing a stamp: IMU, baro, mag, GNSS.
int event_priority(const SensorEvent& e);

struct EkfCounters {
  int propagations = 0;
  int baro_updates = 0;
  int mag_updates = 0;
  int gnss_updates = 0;
  int rejected = 0;  // singular S, gated or degenerate
};

/// Stateful estimator: owns the belief, the GNSS origin latch, the
/// air density and the fault latch.
class Ekf {
 public:
  explicit Ekf(EkfConfig cfg);

  void propagate(const ImuInput& u);
  UpdateStatus update_baro(const BaroMeasurement& z);
  UpdateStatus update_mag(const MagMeasurement& z);
  UpdateStatus update_gnss(const GnssMeasurement& z);

  /// Dispatches one event; returns true when it was an IMU sample.
  bool process(const SensorEvent& e);

  const EkfBelief& belief() const { return belief_; }
  void set_belief(const EkfBelief& b) { belief_ = b; }
  const EkfConfig& config() const { return cfg_; }
  void set_config(const EkfConfig& cfg) { cfg_ = cfg; }

  /// Last IMU rate estimate, y_gyro - b_gyro.
  Vec3 body_rates() const { return rates_; }
  const std::optional<GeoOrigin>& origin() const { return origin_; }
  std::optional<double> density() const { return rho_; }
  bool faulted() const { return faulted_; }
  const EkfCounters& counters() const { return counters_; }

 private:
  bool check_finite(const EkfBelief& candidate);

  EkfConfig cfg_;
  EkfBelief belief_;
  std::optional<double> last_imu_stamp_;
  std::optional<GeoOrigin> origin_;
  std::optional<double> rho_;
  Vec3 rates_ = Vec3::Zero();
  bool faulted_ = false;
  EkfCounters counters_;
};

}  // namespace rotor::est
