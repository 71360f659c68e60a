#include "rotor/estimator/ekf_math.hpp"

#include <cmath>

namespace rotor::est {

StateVec StateVector::to_vec() const {
  StateVec s;
  s << p, v, att.vec(), gyro_bias;
  return s;
}

StateVector StateVector::from_vec(const StateVec& s) {
  StateVector x;
  x.p = s.segment<3>(kPos);
  x.v = s.segment<3>(kVel);
  x.att = EulerAngles::from(s.segment<3>(kAtt));
  x.gyro_bias = s.segment<3>(kBias);
  return x;
}

namespace {

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return m;
}
Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return m;
}
Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}
Mat3 d_rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << 0, 0, 0, 0, -s, -c, 0, c, -s;
  return m;
}
Mat3 d_rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << -s, 0, c, 0, 0, 0, -c, 0, -s;
  return m;
}
Mat3 d_rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << -s, -c, 0, c, -s, 0, 0, 0, 0;
  return m;
}

Vec3 gravity_vec() { return {0.0, 0.0, kGravity}; }

}  // namespace

std::array<Mat3, 3> rotation_partials(const EulerAngles& e) {
  const Mat3 rx = rot_x(e.roll), ry = rot_y(e.pitch), rz = rot_z(e.yaw);
  return {rz * ry * d_rot_x(e.roll), rz * d_rot_y(e.pitch) * rx, d_rot_z(e.yaw) * ry * rx};
}

std::array<Mat3, 2> kinematics_partials(const EulerAngles& e, double guard) {
  euler_kinematics(e, guard);  // guard check
  const double cp = std::cos(e.roll), sp = std::sin(e.roll);
  const double ct = std::cos(e.pitch), tt = std::tan(e.pitch);
  const double sec = 1.0 / ct;
  Mat3 d_roll, d_pitch;
  d_roll << 0, cp * tt, -sp * tt,
            0, -sp, -cp,
            0, cp * sec, -sp * sec;
  d_pitch << 0, sp * sec * sec, cp * sec * sec,
             0, 0, 0,
             0, sp * sec * tt, cp * sec * tt;
  return {d_roll, d_pitch};
}

Mat3 d_rotate_d_euler(const EulerAngles& e, const Vec3& v) {
  const auto dR = rotation_partials(e);
  Mat3 out;
  for (int k = 0; k < 3; ++k) out.col(k) = dR[k] * v;
  return out;
}

StateVec dynamics(const StateVector& x, const ImuInput& u, double guard) {
  const Mat3 R = rotation_body_to_inertial(x.att);
  const Mat3 S = euler_kinematics(x.att, guard);
  const Vec3 omega = u.gyro - x.gyro_bias;
  StateVec f;
  f.segment<3>(kPos) = R * x.v;
  f.segment<3>(kVel) = R.transpose() * gravity_vec() + u.accel + x.v.cross(omega);
  f.segment<3>(kAtt) = S * omega;
  f.segment<3>(kBias).setZero();
  return f;
}

StateMat jacobian_state(const StateVector& x, const ImuInput& u, double guard) {
  const Mat3 R = rotation_body_to_inertial(x.att);
  const Mat3 S = euler_kinematics(x.att, guard);
  const Vec3 omega = u.gyro - x.gyro_bias;
  const auto dR = rotation_partials(x.att);
  const auto dS = kinematics_partials(x.att, guard);

  StateMat A = StateMat::Zero();
  A.block<3, 3>(kPos, kVel) = R;
  A.block<3, 3>(kPos, kAtt) = d_rotate_d_euler(x.att, x.v);

  A.block<3, 3>(kVel, kVel) = -skew(omega);
  for (int k = 0; k < 3; ++k) A.block<3, 1>(kVel, kAtt + k) = dR[k].transpose() * gravity_vec();
  // v x (y_gyro - b) depends on the bias through omega.
  A.block<3, 3>(kVel, kBias) = -skew(x.v);

  A.block<3, 1>(kAtt, kAtt) = dS[0] * omega;
  A.block<3, 1>(kAtt, kAtt + 1) = dS[1] * omega;
  A.block<3, 3>(kAtt, kBias) = -S;
  // Bias dynamics are zero: the bias block stays 0.
  return A;
}

InputJac jacobian_input(const StateVector& x, const ImuInput&, double guard) {
  InputJac G = InputJac::Zero();
  G.block<3, 3>(kVel, 0) = Mat3::Identity();
  G.block<3, 3>(kVel, 3) = skew(x.v);
  G.block<3, 3>(kAtt, 3) = euler_kinematics(x.att, guard);
  return G;
}

StateMat discretize(const StateMat& A, double Ts) {
  return StateMat::Identity() + A * Ts + A * A * (Ts * Ts / 2.0);
}

EkfBelief propagate(const EkfBelief& b, const ImuInput& u, double Ts, int substeps,
                    const NoiseConfig& noise, NoiseScaling scaling, double guard) {
  EkfBelief out = b;
  const double h = Ts / substeps;
  const double q_scale = scaling == NoiseScaling::kPrinted
                             ? (Ts / (2.0 * substeps)) * (Ts / (2.0 * substeps))
                             : h;
  for (int i = 0; i < substeps; ++i) {
    const StateVec f = dynamics(out.x, u, guard);
    const StateMat Ad = discretize(jacobian_state(out.x, u, guard), h);
    const InputJac G = jacobian_input(out.x, u, guard);

    StateVector next = StateVector::from_vec(out.x.to_vec() + f * h);
    next.att.yaw = wrap_angle(next.att.yaw);
    out.x = next;

    StateMat P = Ad * out.P * Ad.transpose() + (noise.Q + G * noise.Q_u * G.transpose()) * q_scale;
    out.P = (P + P.transpose()) / 2.0;
  }
  out.t = b.t + Ts;
  return out;
}

Eigen::MatrixXd innovation_covariance_full(const Eigen::MatrixXd& F, const Eigen::MatrixXd& R,
                                           const Eigen::MatrixXd& G, const Eigen::MatrixXd& P,
                                           const Eigen::MatrixXd& C) {
  Eigen::MatrixXd S = F * R * F.transpose();
  S += G * P * G.transpose();
  S += C * P * C.transpose();
  S -= 2.0 * (G * P * C.transpose());
  return (S + S.transpose()) / 2.0;
}

UpdateStatus joseph_update(Eigen::VectorXd& x, Eigen::MatrixXd& P, const Eigen::VectorXd& innovation,
                           const Eigen::MatrixXd& C, const Eigen::MatrixXd& S,
                           const Eigen::MatrixXd& R) {
  if (!S.allFinite()) return UpdateStatus::kSingular;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxInnovationCondition) return UpdateStatus::kSingular;

  // K = P C^T S^-1, computed as (S^-1 C P)^T with P and S symmetric.
  const Eigen::MatrixXd K = S.llt().solve(C * P).transpose();
  x += K * innovation;
  const Eigen::MatrixXd IKC = Eigen::MatrixXd::Identity(P.rows(), P.cols()) - K * C;
  Eigen::MatrixXd next = IKC * P * IKC.transpose() + K * R * K.transpose();
  P = (next + next.transpose()) / 2.0;
  return UpdateStatus::kApplied;
}

UpdateStatus update_joseph(EkfBelief& b, const Eigen::VectorXd& innovation, const Eigen::MatrixXd& C,
                           const Eigen::MatrixXd& S, const Eigen::MatrixXd& R) {
  Eigen::VectorXd x = b.x.to_vec();
  Eigen::MatrixXd P = b.P;
  const UpdateStatus status = joseph_update(x, P, innovation, C, S, R);
  if (status != UpdateStatus::kApplied) return status;
  StateVector next = StateVector::from_vec(x);
  next.att.roll = wrap_angle(next.att.roll);
  next.att.yaw = wrap_angle(next.att.yaw);
  b.x = next;
  b.P = P;
  return status;
}

}  // namespace rotor::est
