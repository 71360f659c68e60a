#include "rotor/controller/types.hpp"

#include <algorithm>

namespace rotor::ctrl {

double Pid::update(double error, double measurement, double dt) {
  double derivative = 0.0;
  if (has_last_ && dt > 0.0) derivative = (measurement - last_measurement_) / dt;
  last_measurement_ = measurement;
  has_last_ = true;
  return finish(error, derivative, dt);
}

double Pid::update_with_rate(double error, double measurement_rate, double dt) {
  return finish(error, measurement_rate, dt);
}

double Pid::finish(double error, double derivative, double dt) {
  if (gains_.ki != 0.0) {
    integral_ = std::clamp(integral_ + error * dt, -gains_.i_limit, gains_.i_limit);
  }
  const double out = gains_.kp * error + gains_.ki * integral_ - gains_.kd * derivative;
  return std::clamp(out, -gains_.out_limit, gains_.out_limit);
}

void Pid::reset() {
  integral_ = 0.0;
  has_last_ = false;
  last_measurement_ = 0.0;
}

}  // namespace rotor::ctrl
