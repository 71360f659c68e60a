#pragma once

// Continuous-discrete EKF building blocks. Free functions so the tests can
// drive them with arbitrary beliefs and compare against oracles.

#include "rotor/estimator/types.hpp"

#include <Eigen/Dense>

#include <array>

namespace rotor::est {

/// Partial derivatives of R_b^i with respect to roll, pitch and yaw.
std::array<Mat3, 3> rotation_partials(const EulerAngles& e);

/// Partial derivatives of S(theta) with respect to roll and pitch (yaw is zero).
std::array<Mat3, 2> kinematics_partials(const EulerAngles& e, double guard = kDefaultGimbalGuard);

/// Columns are d(R v)/d(roll, pitch, yaw).
Mat3 d_rotate_d_euler(const EulerAngles& e, const Vec3& v);

/// x_dot = f(x, u) with a = y_accel and omega = y_gyro - b_gyro.
StateVec dynamics(const StateVector& x, const ImuInput& u, double guard = kDefaultGimbalGuard);

/// Continuous-time Jacobian df/dx.
StateMat jacobian_state(const StateVector& x, const ImuInput& u,
                        double guard = kDefaultGimbalGuard);

/// df/du with u = [y_accel, y_gyro].
InputJac jacobian_input(const StateVector& x, const ImuInput& u,
                        double guard = kDefaultGimbalGuard);

/// Second-order matrix exponential: I + A Ts + A^2 Ts^2 / 2.
StateMat discretize(const StateMat& A, double Ts);

/// N Euler substeps of the state with per-substep covariance update. Yaw is
/// re-wrapped and P symmetrized. Throws GimbalError.
EkfBelief propagate(const EkfBelief& b, const ImuInput& u, double Ts, int substeps,
                    const NoiseConfig& noise, NoiseScaling scaling = NoiseScaling::kPrinted,
                    double guard = kDefaultGimbalGuard);

/// S = F R F^T + G P G^T + C P C^T - 2 G P C^T, symmetrized.
Eigen::MatrixXd innovation_covariance_full(const Eigen::MatrixXd& F, const Eigen::MatrixXd& R,
                                           const Eigen::MatrixXd& G, const Eigen::MatrixXd& P,
                                           const Eigen::MatrixXd& C);

enum class UpdateStatus { kApplied, kSingular, kGated, kDegenerate, kNotReady, kFault };

inline constexpr double kMaxInnovationCondition = 1e12;

/// Generic Joseph-form update on a state of any dimension. Returns kSingular
/// without touching x or P when S is not positive definite or its condition
/// number exceeds kMaxInnovationCondition.
UpdateStatus joseph_update(Eigen::VectorXd& x, Eigen::MatrixXd& P, const Eigen::VectorXd& innovation,
                           const Eigen::MatrixXd& C, const Eigen::MatrixXd& S,
                           const Eigen::MatrixXd& R);

/// Joseph update on the full belief; wraps roll and yaw afterwards.
UpdateStatus update_joseph(EkfBelief& b, const Eigen::VectorXd& innovation, const Eigen::MatrixXd& C,
                           const Eigen::MatrixXd& S, const Eigen::MatrixXd& R);

}  // namespace rotor::est
