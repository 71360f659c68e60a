#pragma once

// Test-only reference implementations. Nothing here calls into the code
// paths it is used to check.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

inline Eigen::Matrix3d rx(double a) {
  Eigen::Matrix3d m;
  m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return m;
}
inline Eigen::Matrix3d ry(double a) {
  Eigen::Matrix3d m;
  m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return m;
}
inline Eigen::Matrix3d rz(double a) {
  Eigen::Matrix3d m;
  m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return m;
}
/// ZYX composition: yaw, then pitch, then roll.
inline Eigen::Matrix3d rot_zyx(double roll, double pitch, double yaw) {
  return rz(yaw) * ry(pitch) * rx(roll);
}

/// Central-difference Jacobian of f: R^n -> R^m.
inline Eigen::MatrixXd numeric_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h = 1e-6) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

/// Normwise relative error max|A - B| / max|B|.
inline double rel_err(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const double scale = B.cwiseAbs().maxCoeff();
  const double diff = (A - B).cwiseAbs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

/// Matrix exponential by scaling and squaring of a 20-term Taylor series.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& A) {
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::pow(2.0, s) > 0.5) ++s;
  const Eigen::MatrixXd B = A / std::pow(2.0, s);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 20; ++k) {
    term = term * B / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// Scalar Kalman measurement update, textbook form.
struct ScalarKf {
  double x;
  double p;
  void update(double z, double r) {
    const double k = p / (p + r);
    x = x + k * (z - x);
    p = (1.0 - k) * p;
  }
};

/// Standard troposphere density straight from the model constants.
inline double troposphere_density(double h) {
  const double T0 = 288.15, P0 = 101325.0, L = 0.0065, Rair = 287.053, g = 9.80665;
  const double T = T0 - L * h;
  return P0 * std::pow(T / T0, g / (L * Rair)) / (Rair * T);
}

}  // namespace oracle
