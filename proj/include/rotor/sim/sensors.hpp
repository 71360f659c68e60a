#pragma once

#include "rotor/estimator/types.hpp"
#include "rotor/rate_gate.hpp"
#include "rotor/sim/vehicle.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace rotor::sim {

struct HomeLocation {
  double lat = deg2rad(40.2338);   // rad
  double lon = deg2rad(-111.6585); // rad
  double alt = 1387.0;             // m above sea level
};

struct SensorConfig {
  double imu_rate = 250.0;
  double baro_rate = 25.0;
  double mag_rate = 50.0;
  double gnss_rate = 5.0;

  double accel_sigma = 0.25;     // m/s^2
  double gyro_sigma = 0.005;     // rad/s
  double baro_sigma = 3.0;       // Pa
  double mag_sigma = 0.005;      // unit field
  double gnss_pos_sigma = 0.4;   // m
  double gnss_vel_sigma = 0.05;  // m/s

  Vec3 accel_bias = Vec3::Zero();
  Vec3 gyro_bias{0.005, -0.003, 0.002};
  double baro_bias = 0.0;

  double declination = 0.0;            // rad
  double inclination = deg2rad(60.0);  // rad, positive down
  HomeLocation home;
  std::uint64_t seed = 1;
};

/// Unit magnetic field in NED.
Vec3 magnetic_field_ned(double declination, double inclination);

/// Standard-atmosphere density at the given altitude, kg/m^3.
double sim_air_density(double alt_msl);

struct SensorSample {
  std::optional<est::ImuInput> imu;
  std::optional<est::BaroMeasurement> baro;
  std::optional<est::MagMeasurement> mag;
  std::optional<est::GnssMeasurement> gnss;
};

/// Rate-gated synthetic sensors. Each sensor has its own generator derived
/// from the seed, so streams do not depend on which other sensors fire.
class SensorSuite {
 public:
  SensorSuite(SensorConfig cfg, double base_rate);

  /// `specific_force` is the body-frame non-gravitational acceleration.
  SensorSample sample(std::int64_t tick, double t, const TruthState& truth, const Vec3& specific_force);

  const SensorConfig& config() const { return cfg_; }
  double density() const { return rho_; }

 private:
  double draw(std::mt19937_64& rng, double sigma);

  SensorConfig cfg_;
  RateGate imu_gate_, baro_gate_, mag_gate_, gnss_gate_;
  std::mt19937_64 imu_rng_, baro_rng_, mag_rng_, gnss_rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  Vec3 field_ned_;
  double rho_;
};

}  // namespace rotor::sim
