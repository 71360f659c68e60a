#include "rotor/sim/sensors.hpp"

#include <cmath>
#include <stdexcept>

namespace rotor::sim {

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

// Body-to-NED rotation built from elementary rotations, yaw-pitch-roll.
Mat3 body_to_ned(const EulerAngles& a) {
  const Mat3 Rz = Eigen::AngleAxisd(a.yaw, Vec3::UnitZ()).toRotationMatrix();
  const Mat3 Ry = Eigen::AngleAxisd(a.pitch, Vec3::UnitY()).toRotationMatrix();
  const Mat3 Rx = Eigen::AngleAxisd(a.roll, Vec3::UnitX()).toRotationMatrix();
  return Rz * Ry * Rx;
}

}  // namespace

Vec3 magnetic_field_ned(double declination, double inclination) {
  return {std::cos(inclination) * std::cos(declination), std::cos(inclination) * std::sin(declination),
          std::sin(inclination)};
}

double sim_air_density(double alt_msl) {
  constexpr double T0 = 288.15, P0 = 101325.0, L = 0.0065, R = 287.053;
  if (!(alt_msl >= 0.0 && alt_msl < 11000.0)) throw std::out_of_range("home altitude outside the troposphere");
  const double rho0 = P0 / (R * T0);
  return rho0 * std::pow(1.0 - L * alt_msl / T0, kGravity / (L * R) - 1.0);
}

SensorSuite::SensorSuite(SensorConfig cfg, double base_rate)
    : cfg_(cfg),
      imu_gate_(cfg.imu_rate, base_rate),
      baro_gate_(cfg.baro_rate, base_rate),
      mag_gate_(cfg.mag_rate, base_rate),
      gnss_gate_(cfg.gnss_rate, base_rate),
      imu_rng_(make_rng(cfg.seed, 1)),
      baro_rng_(make_rng(cfg.seed, 2)),
      mag_rng_(make_rng(cfg.seed, 3)),
      gnss_rng_(make_rng(cfg.seed, 4)),
      field_ned_(magnetic_field_ned(cfg.declination, cfg.inclination)),
      rho_(sim_air_density(cfg.home.alt)) {}

double SensorSuite::draw(std::mt19937_64& rng, double sigma) { return sigma > 0.0 ? sigma * normal_(rng) : 0.0; }

SensorSample SensorSuite::sample(std::int64_t tick, double t, const TruthState& truth, const Vec3& specific_force) {
  SensorSample out;
  const Mat3 R = body_to_ned(truth.att);

  if (imu_gate_.due(tick)) {
    est::ImuInput m;
    m.stamp = t;
    for (int i = 0; i < 3; ++i) m.accel(i) = specific_force(i) + cfg_.accel_bias(i) + draw(imu_rng_, cfg_.accel_sigma);
    for (int i = 0; i < 3; ++i) m.gyro(i) = truth.omega(i) + cfg_.gyro_bias(i) + draw(imu_rng_, cfg_.gyro_sigma);
    out.imu = m;
  }
  if (baro_gate_.due(tick)) {
    // Gauge pressure relative to the home altitude.
    out.baro = est::BaroMeasurement{t, rho_ * kGravity * (-truth.p.z()) + cfg_.baro_bias + draw(baro_rng_, cfg_.baro_sigma)};
  }
  if (mag_gate_.due(tick)) {
    est::MagMeasurement m;
    m.stamp = t;
    m.field = R.transpose() * field_ned_;
    for (int i = 0; i < 3; ++i) m.field(i) += draw(mag_rng_, cfg_.mag_sigma);
    out.mag = m;
  }
  if (gnss_gate_.due(tick)) {
    const double north = truth.p.x() + draw(gnss_rng_, cfg_.gnss_pos_sigma);
    const double east = truth.p.y() + draw(gnss_rng_, cfg_.gnss_pos_sigma);
    const double down = truth.p.z() + draw(gnss_rng_, cfg_.gnss_pos_sigma);
    est::GnssMeasurement m;
    m.stamp = t;
    m.lat = cfg_.home.lat + north / kEarthRadius;
    m.lon = cfg_.home.lon + east / (kEarthRadius * std::cos(m.lat));
    m.alt = cfg_.home.alt - down;
    m.vel_ned = R * truth.v_b;
    for (int i = 0; i < 3; ++i) m.vel_ned(i) += draw(gnss_rng_, cfg_.gnss_vel_sigma);
    out.gnss = m;
  }
  return out;
}

}  // namespace rotor::sim
