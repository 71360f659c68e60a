#include "rotor/math.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace rotor;

TEST_CASE("rotation: identity and pure yaw") {
  CHECK(rotation_body_to_inertial({0, 0, 0}).isApprox(Mat3::Identity(), 0.0));
  const Vec3 x = rotation_body_to_inertial({0, 0, kPi / 2}) * Vec3(1, 0, 0);
  CHECK(x.x() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(x.y() == doctest::Approx(1.0));
  CHECK(std::abs(x.z()) < 1e-15);
}

TEST_CASE("rotation: orthonormal, det 1, matches ZYX composition") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-kPi, kPi), pit(-1.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const EulerAngles e{ang(rng), pit(rng), ang(rng)};
    const Mat3 R = rotation_body_to_inertial(e);
    CHECK((R * R.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(R.determinant() - 1.0) <= 1e-12);
    CHECK((R - oracle::rot_zyx(e.roll, e.pitch, e.yaw)).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("euler kinematics: identity, roll 90, yaw independence") {
  CHECK(euler_kinematics({0, 0, 0}) == Mat3::Identity());
  for (double psi : {-3.0, -1.0, 0.5, 2.0, kPi}) CHECK(euler_kinematics({0, 0, psi}) == Mat3::Identity());

  const Mat3 S = euler_kinematics({kPi / 2, 0, 0});
  Mat3 expected;
  expected << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  CHECK((S - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("euler kinematics: gimbal guard") {
  CHECK_THROWS_AS(euler_kinematics({0, kPi / 2, 0}), GimbalError);
  CHECK_THROWS_AS(euler_kinematics({0, -(kPi / 2 - 5e-4), 0}), GimbalError);
  CHECK_NOTHROW(euler_kinematics({0, kPi / 2 - 2e-3, 0}));
  CHECK_THROWS_AS(euler_kinematics({0, 1.0, 0}, 0.6), GimbalError);
}

TEST_CASE("euler kinematics matches finite differences of rotation composition") {
  // R(e + S w dt) ~= R(e) * exp([w]x dt) for body rates w.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-kPi, kPi), pit(-1.0, 1.0), rate(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const EulerAngles e{ang(rng), pit(rng), ang(rng)};
    const Vec3 w(rate(rng), rate(rng), rate(rng));
    const double h = 1e-6;
    const Mat3 R = oracle::rot_zyx(e.roll, e.pitch, e.yaw);
    // Propagate the rotation by the body rate both ways, then recover the
    // Euler rates by central differences on the composed matrix.
    const Mat3 Rp = R * oracle::expm(skew(w) * h);
    const Mat3 Rm = R * oracle::expm(skew(w) * -h);
    auto to_euler = [](const Mat3& M) {
      return Vec3(std::atan2(M(2, 1), M(2, 2)), -std::asin(M(2, 0)), std::atan2(M(1, 0), M(0, 0)));
    };
    Vec3 d = to_euler(Rp) - to_euler(Rm);
    for (int k = 0; k < 3; ++k) d(k) = wrap_angle(d(k));
    const Vec3 fd = d / (2 * h);
    const Vec3 an = euler_kinematics(e) * w;
    CHECK((an - fd).norm() / std::max(1.0, fd.norm()) <= 1e-5);
  }
}

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(wrap_angle(-kPi) == kPi);
  CHECK(wrap_angle(0.1) == 0.1);
  CHECK(wrap_angle(kPi) == kPi);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> a(-100, 100);
  for (int i = 0; i < 10000; ++i) {
    const double x = a(rng);
    const double w = wrap_angle(x);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(wrap_angle(w) == w);
    CHECK(std::abs(std::remainder(x - w, 2 * kPi)) < 1e-12);
  }
}

TEST_CASE("quintic smoothstep") {
  const auto s0 = quintic_smoothstep(0.0);
  CHECK(s0.value == 0.0);
  CHECK(s0.d1 == 0.0);
  CHECK(s0.d2 == 0.0);
  const auto s1 = quintic_smoothstep(1.0);
  CHECK(s1.value == 1.0);
  CHECK(s1.d1 == 0.0);
  CHECK(s1.d2 == 0.0);
  const auto sm = quintic_smoothstep(0.5);
  CHECK(sm.value == 0.5);
  CHECK(sm.d1 == 1.875);  // 30/16 - 60/8 + 30/4
  // Out of range clamps.
  CHECK(quintic_smoothstep(-1.0).value == 0.0);
  CHECK(quintic_smoothstep(2.0).value == 1.0);

  double peak = 0.0, arg = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i * 1e-3;
    const auto s = quintic_smoothstep(t);
    CHECK(s.d1 >= 0.0);
    if (s.d1 > peak) {
      peak = s.d1;
      arg = t;
    }
    // Derivatives against central differences of the value.
    if (i > 0 && i < 1000) {
      const double h = 1e-5;
      const double fd1 = (quintic_smoothstep(t + h).value - quintic_smoothstep(t - h).value) / (2 * h);
      const double fd2 = (quintic_smoothstep(t + h).d1 - quintic_smoothstep(t - h).d1) / (2 * h);
      CHECK(s.d1 == doctest::Approx(fd1).epsilon(1e-7));
      CHECK(s.d2 == doctest::Approx(fd2).epsilon(1e-6));
    }
  }
  CHECK(peak == kSmoothstepPeakSlope);
  CHECK(arg == doctest::Approx(0.5));
}
