#pragma once

#include "rotor/math.hpp"

#include <Eigen/Dense>

namespace rotor::est {

inline constexpr int kStateDim = 12;
inline constexpr int kPos = 0;
inline constexpr int kVel = 3;
inline constexpr int kAtt = 6;
inline constexpr int kBias = 9;

using StateVec = Eigen::Matrix<double, kStateDim, 1>;
using StateMat = Eigen::Matrix<double, kStateDim, kStateDim>;
using InputJac = Eigen::Matrix<double, kStateDim, 6>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// x = [p (NED, m), v (body, m/s), euler (rad), gyro bias (rad/s)].
struct StateVector {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  EulerAngles att;
  Vec3 gyro_bias = Vec3::Zero();

  StateVec to_vec() const;
  static StateVector from_vec(const StateVec& s);
};

struct EkfBelief {
  StateVector x;
  StateMat P = StateMat::Zero();
  double t = 0.0;
};

struct ImuInput {
  double stamp = 0.0;
  Vec3 accel = Vec3::Zero();  // specific force, body, m/s^2
  Vec3 gyro = Vec3::Zero();   // body rate, rad/s
};

/// Static pressure relative to the pressure at initialization, Pa.
struct BaroMeasurement {
  double stamp = 0.0;
  double pressure = 0.0;
};

struct MagMeasurement {
  double stamp = 0.0;
  Vec3 field = Vec3::Zero();
};

struct GnssMeasurement {
  double stamp = 0.0;
  double lat = 0.0;  // rad
  double lon = 0.0;  // rad
  double alt = 0.0;  // m above sea level
  Vec3 vel_ned = Vec3::Zero();
};

enum class NoiseScaling {
  kPrinted,  // (Q + G Qu G^T) * (Ts / 2N)^2
  kLinear,   // (Q + G Qu G^T) * (Ts / N)
};

struct NoiseConfig {
  StateMat Q = StateMat::Zero();
  Mat6 Q_u = Mat6::Zero();
  double R_baro = 0.0;
  Mat3 R_mag = Mat3::Zero();
  Mat5 R_gnss = Mat5::Zero();
};

}  // namespace rotor::est
