#include "rotor/estimator/ekf.hpp"

#include <cmath>

namespace rotor::est {

double event_stamp(const SensorEvent& e) {
  return std::visit([](const auto& m) { return m.stamp; }, e);
}

int event_priority(const SensorEvent& e) { return static_cast<int>(e.index()); }

namespace {

bool passes_gate(double threshold, const Eigen::VectorXd& nu, const Eigen::MatrixXd& S) {
  if (threshold <= 0.0) return true;
  const double d2 = nu.dot(S.ldlt().solve(nu));
  return d2 <= threshold;
}

}  // namespace

Ekf::Ekf(EkfConfig cfg) : cfg_(std::move(cfg)), origin_(cfg_.origin) {
  belief_.P = cfg_.P0_diag.asDiagonal();
}

bool Ekf::check_finite(const EkfBelief& candidate) {
  if (candidate.x.to_vec().allFinite() && candidate.P.allFinite()) return true;
  faulted_ = true;
  return false;
}

void Ekf::propagate(const ImuInput& u) {
  if (faulted_) return;
  if (!last_imu_stamp_) {
    last_imu_stamp_ = u.stamp;
    belief_.t = u.stamp;
    rates_ = u.gyro - belief_.x.gyro_bias;
    return;
  }
  const double Ts = u.stamp - *last_imu_stamp_;
  last_imu_stamp_ = u.stamp;
  if (Ts > 0.0) {
    try {
      EkfBelief next = est::propagate(belief_, u, Ts, cfg_.substeps, cfg_.noise, cfg_.scaling,
                                      cfg_.gimbal_guard);
      if (!check_finite(next)) return;
      next.t = u.stamp;
      belief_ = next;
      ++counters_.propagations;
    } catch (const GimbalError&) {
      faulted_ = true;
      return;
    }
  }
  rates_ = u.gyro - belief_.x.gyro_bias;
}

UpdateStatus Ekf::update_baro(const BaroMeasurement& z) {
  if (faulted_) return UpdateStatus::kFault;
  if (!std::isfinite(z.pressure)) {
    faulted_ = true;
    return UpdateStatus::kFault;
  }
  if (!rho_) return UpdateStatus::kNotReady;
  const Eigen::MatrixXd C = baro_jacobian(*rho_);
  Eigen::VectorXd nu(1);
  nu(0) = z.pressure - baro_model(belief_.x, *rho_);
  Eigen::MatrixXd R(1, 1);
  R(0, 0) = cfg_.noise.R_baro;
  const Eigen::MatrixXd S = R + C * belief_.P * C.transpose();
  if (!passes_gate(cfg_.gate_baro, nu, S)) {
    ++counters_.rejected;
    return UpdateStatus::kGated;
  }
  EkfBelief next = belief_;
  const UpdateStatus status = update_joseph(next, nu, C, S, R);
  if (status != UpdateStatus::kApplied) {
    ++counters_.rejected;
    return status;
  }
  if (!check_finite(next)) return UpdateStatus::kFault;
  belief_ = next;
  ++counters_.baro_updates;
  return status;
}

UpdateStatus Ekf::update_mag(const MagMeasurement& z) {
  if (faulted_) return UpdateStatus::kFault;
  if (!z.field.allFinite()) {
    faulted_ = true;
    return UpdateStatus::kFault;
  }
  double heading = 0.0;
  MagJacobians J;
  try {
    heading = mag_heading(z.field, belief_.x.att, cfg_.declination);
    J = mag_heading_jacobians(z.field, belief_.x.att);
  } catch (const DegenerateFieldError&) {
    ++counters_.rejected;
    return UpdateStatus::kDegenerate;
  }
  const Eigen::MatrixXd C = mag_jacobian();
  const Eigen::MatrixXd G = J.G;
  const Eigen::MatrixXd F = J.F;
  const Eigen::MatrixXd P = belief_.P;
  const Eigen::MatrixXd S_full = innovation_covariance_full(F, cfg_.noise.R_mag, G, P, C);

  // The Joseph term takes the part of S not explained by the yaw state,
  // floored at the raw-field contribution so P stays PSD.
  const Eigen::MatrixXd CPC = C * P * C.transpose();
  const Eigen::MatrixXd FRF = F * cfg_.noise.R_mag * F.transpose();
  Eigen::MatrixXd R_eff = S_full - CPC;
  if (R_eff(0, 0) < FRF(0, 0)) R_eff = FRF;
  const Eigen::MatrixXd S = CPC + R_eff;

  Eigen::VectorXd nu(1);
  nu(0) = wrap_angle(heading - belief_.x.att.yaw);
  if (!passes_gate(cfg_.gate_mag, nu, S)) {
    ++counters_.rejected;
    return UpdateStatus::kGated;
  }
  EkfBelief next = belief_;
  const UpdateStatus status = update_joseph(next, nu, C, S, R_eff);
  if (status != UpdateStatus::kApplied) {
    ++counters_.rejected;
    return status;
  }
  if (!check_finite(next)) return UpdateStatus::kFault;
  belief_ = next;
  ++counters_.mag_updates;
  return status;
}

UpdateStatus Ekf::update_gnss(const GnssMeasurement& z) {
  if (faulted_) return UpdateStatus::kFault;
  if (!(std::isfinite(z.lat) && std::isfinite(z.lon) && std::isfinite(z.alt) && z.vel_ned.allFinite())) {
    faulted_ = true;
    return UpdateStatus::kFault;
  }
  if (!origin_) origin_ = GeoOrigin{z.lat, z.lon, z.alt};
  if (!rho_) {
    try {
      rho_ = air_density(z.alt);
    } catch (const AtmosphereError&) {
      // Leave baro disabled; the fix is still usable.
    }
  }
  const Eigen::MatrixXd C = gnss_jacobian(belief_.x);
  const Eigen::VectorXd nu = gnss_measurement_vector(z, *origin_) - gnss_model(belief_.x);
  const Eigen::MatrixXd R = cfg_.noise.R_gnss;
  const Eigen::MatrixXd S = R + C * belief_.P * C.transpose();
  if (!passes_gate(cfg_.gate_gnss, nu, S)) {
    ++counters_.rejected;
    return UpdateStatus::kGated;
  }
  EkfBelief next = belief_;
  const UpdateStatus status = update_joseph(next, nu, C, S, R);
  if (status != UpdateStatus::kApplied) {
    ++counters_.rejected;
    return status;
  }
  if (!check_finite(next)) return UpdateStatus::kFault;
  belief_ = next;
  ++counters_.gnss_updates;
  return status;
}

bool Ekf::process(const SensorEvent& e) {
  struct Visitor {
    Ekf& ekf;
    bool operator()(const ImuInput& m) {
      ekf.propagate(m);
      return true;
    }
    bool operator()(const BaroMeasurement& m) {
      ekf.update_baro(m);
      return false;
    }
    bool operator()(const MagMeasurement& m) {
      ekf.update_mag(m);
      return false;
    }
    bool operator()(const GnssMeasurement& m) {
      ekf.update_gnss(m);
      return false;
    }
  };
  return std::visit(Visitor{*this}, e);
}

}  // namespace rotor::est
