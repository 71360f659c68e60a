#include "rotor/controller/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace rotor::ctrl {

namespace {

struct PidField {
  const char* name;
  PidGains GainSet::*pid;
};

constexpr PidField kPidFields[] = {
    {"pos_n", &GainSet::pos_n}, {"pos_e", &GainSet::pos_e}, {"pos_d", &GainSet::pos_d},
    {"vel_n", &GainSet::vel_n}, {"vel_e", &GainSet::vel_e}, {"vel_d", &GainSet::vel_d},
    {"yaw", &GainSet::yaw},     {"roll", &GainSet::roll},   {"pitch", &GainSet::pitch},
    {"roll_rate", &GainSet::roll_rate}, {"pitch_rate", &GainSet::pitch_rate},
    {"yaw_rate", &GainSet::yaw_rate},
};

struct ScalarField {
  const char* name;
  double GainSet::*value;
};

constexpr ScalarField kScalarFields[] = {
    {"mass", &GainSet::mass},
    {"max_thrust", &GainSet::max_thrust},
    {"tilt_limit", &GainSet::tilt_limit},
    {"stale_timeout", &GainSet::stale_timeout},
    {"failsafe_throttle_scale", &GainSet::failsafe_throttle_scale},
};

constexpr std::pair<const char*, double PidGains::*> kPidMembers[] = {
    {"kp", &PidGains::kp}, {"ki", &PidGains::ki}, {"kd", &PidGains::kd},
    {"out_limit", &PidGains::out_limit}, {"i_limit", &PidGains::i_limit},
};

void check_mode(int mode) {
  if (mode < 0 || mode >= kModeCount) throw ControllerError("unknown controller mode " + std::to_string(mode));
}

}  // namespace

bool GainSet::set(const std::string& key, double value) {
  for (const auto& f : kScalarFields) {
    if (key == f.name) {
      this->*(f.value) = value;
      return true;
    }
  }
  const auto dot = key.find('.');
  if (dot == std::string::npos) return false;
  const std::string loop = key.substr(0, dot), member = key.substr(dot + 1);
  for (const auto& f : kPidFields) {
    if (loop != f.name) continue;
    for (const auto& [m, ptr] : kPidMembers) {
      if (member == m) {
        (this->*(f.pid)).*ptr = value;
        return true;
      }
    }
  }
  return false;
}

std::vector<std::string> GainSet::keys() {
  std::vector<std::string> out;
  for (const auto& f : kScalarFields) out.emplace_back(f.name);
  for (const auto& f : kPidFields)
    for (const auto& m : kPidMembers) out.push_back(std::string(f.name) + "." + m.first);
  return out;
}

AngleSetpoint accel_to_attitude(const Vec3& accel_v1, double yaw_rate, double roll_est, double pitch_est,
                                const GainSet& gains) {
  AngleSetpoint out;
  out.yaw_rate = yaw_rate;
  const double g_eff = kGravity - accel_v1.z();
  if (!(g_eff > 0.0)) {
    auto sgn = [](double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); };
    out.pitch = -sgn(accel_v1.x()) * gains.tilt_limit;
    out.roll = sgn(accel_v1.y()) * gains.tilt_limit;
    out.throttle = 0.0;
    out.saturated = true;
    return out;
  }
  const double pitch = -std::atan(accel_v1.x() / g_eff);
  const double roll = std::atan(accel_v1.y() / g_eff);
  out.pitch = std::clamp(pitch, -gains.tilt_limit, gains.tilt_limit);
  out.roll = std::clamp(roll, -gains.tilt_limit, gains.tilt_limit);
  out.saturated = out.pitch != pitch || out.roll != roll;
  const double tilt = std::cos(roll_est) * std::cos(pitch_est);
  out.throttle = std::clamp(gains.mass * g_eff / (gains.max_thrust * tilt), 0.0, 1.0);
  return out;
}

double thrust_to_throttle(double thrust, const GainSet& gains) {
  return std::clamp(thrust / gains.max_thrust, 0.0, 1.0);
}

std::vector<int> route_path(int mode) {
  check_mode(mode);
  switch (mode) {
    case 0: return {0, 3, 2, 6};
    case 1: return {1, 2, 6};
    case 2: return {2, 6};
    case 3: return {3, 2, 6};
    case 4: return {4, 3, 2, 6};
    case 9: return {9, 10, 11, 8};
    case 10: return {10, 11, 8};
    case 11: return {11, 8};
    default: return {mode};
  }
}

FirmwareKind terminal_kind(int mode) {
  check_mode(mode);
  if (mode == 7) return FirmwareKind::kRate;
  if (mode >= 8) return FirmwareKind::kPassThrough;
  return FirmwareKind::kAngle;
}

Cascade::Cascade(GainSet gains) : gains_(std::move(gains)) { sync_gains(); }

void Cascade::sync_gains() {
  pos_n_.gains() = gains_.pos_n;
  pos_e_.gains() = gains_.pos_e;
  pos_d_.gains() = gains_.pos_d;
  vel_n_.gains() = gains_.vel_n;
  vel_e_.gains() = gains_.vel_e;
  vel_d_.gains() = gains_.vel_d;
  yaw_.gains() = gains_.yaw;
  roll_.gains() = gains_.roll;
  pitch_.gains() = gains_.pitch;
  roll_rate_.gains() = gains_.roll_rate;
  pitch_rate_.gains() = gains_.pitch_rate;
  yaw_rate_.gains() = gains_.yaw_rate;
}

bool Cascade::set_gain(const std::string& key, double value) {
  if (!gains_.set(key, value)) return false;
  sync_gains();
  return true;
}

void Cascade::reset() {
  for (Pid* p : {&pos_n_, &pos_e_, &pos_d_, &vel_n_, &vel_e_, &vel_d_, &yaw_, &roll_, &pitch_, &roll_rate_,
                 &pitch_rate_, &yaw_rate_})
    p->reset();
}

FirmwareCommand Cascade::failsafe(double now) const {
  const double hover = gains_.mass * kGravity / gains_.max_thrust;
  FirmwareCommand c = FirmwareCommand::angle(std::clamp(hover * gains_.failsafe_throttle_scale, 0.0, 1.0),
                                             0.0, 0.0, 0.0);
  c.stamp = now;
  return c;
}

double Cascade::yaw_to_rate(double yaw_d, const EstimateView& est, double dt) {
  return yaw_.update(wrap_angle(yaw_d - est.x.att.yaw), est.x.att.yaw, dt);
}

Vec3 Cascade::position_to_velocity(const Vec3& p_d, const Vec3& mask, const EstimateView& est, double dt) {
  Vec3 v = Vec3::Zero();
  Pid* loops[3] = {&pos_n_, &pos_e_, &pos_d_};
  for (int i = 0; i < 3; ++i) {
    if (mask(i) != 0.0) v(i) = loops[i]->update(p_d(i) - est.x.p(i), est.x.p(i), dt);
  }
  return v;
}

Vec3 Cascade::velocity_to_accel_v1(const Vec3& v_d, const EstimateView& est, double dt) {
  const Vec3 v_ned = rotation_body_to_inertial(est.x.att) * est.x.v;
  const Vec3 a_ned(vel_n_.update(v_d.x() - v_ned.x(), v_ned.x(), dt),
                   vel_e_.update(v_d.y() - v_ned.y(), v_ned.y(), dt),
                   vel_d_.update(v_d.z() - v_ned.z(), v_ned.z(), dt));
  const double c = std::cos(est.x.att.yaw), s = std::sin(est.x.att.yaw);
  return {c * a_ned.x() + s * a_ned.y(), -s * a_ned.x() + c * a_ned.y(), a_ned.z()};
}

std::pair<double, double> Cascade::attitude_loop(double roll_d, double pitch_d, const EstimateView& est,
                                                 double dt) {
  const double p = roll_.update_with_rate(wrap_angle(roll_d - est.x.att.roll), est.rates.x(), dt);
  const double q = pitch_.update_with_rate(wrap_angle(pitch_d - est.x.att.pitch), est.rates.y(), dt);
  return {p, q};
}

Vec3 Cascade::rate_loop(double p_d, double q_d, double r_d, const Vec3& rates, double dt) {
  return {roll_rate_.update(p_d - rates.x(), rates.x(), dt), pitch_rate_.update(q_d - rates.y(), rates.y(), dt),
          yaw_rate_.update(r_d - rates.z(), rates.z(), dt)};
}

FirmwareCommand Cascade::route(const ControlCommand& cmd, const EstimateView& est, double now, double dt) {
  check_mode(cmd.mode);
  if (!(dt > 0.0)) throw ControllerError("controller dt must be positive");
  last_path_.clear();
  last_saturated_ = false;
  last_failsafe_ = now - est.stamp > gains_.stale_timeout;
  if (last_failsafe_) return failsafe(now);

  int mode = cmd.mode;
  std::array<double, 4> v = cmd.values;
  FirmwareCommand out;
  for (;;) {
    last_path_.push_back(mode);
    switch (static_cast<Mode>(mode)) {
      case Mode::kNedPosYaw: {
        const Vec3 vel = position_to_velocity({v[0], v[1], v[2]}, Vec3::Ones(), est, dt);
        v = {vel.x(), vel.y(), vel.z(), yaw_to_rate(v[3], est, dt)};
        mode = 3;
        continue;
      }
      case Mode::kNeVelDPosYawRate: {
        const double vd = position_to_velocity({0, 0, v[2]}, Vec3(0, 0, 1), est, dt).z();
        const Vec3 a = velocity_to_accel_v1({v[0], v[1], vd}, est, dt);
        v = {a.x(), a.y(), a.z(), v[3]};
        mode = 2;
        continue;
      }
      case Mode::kFrdAccelYawRate: {
        const AngleSetpoint s = accel_to_attitude({v[0], v[1], v[2]}, v[3], est.x.att.roll, est.x.att.pitch, gains_);
        last_saturated_ = s.saturated;
        v = {s.roll, s.pitch, s.yaw_rate, s.throttle};
        mode = 6;
        continue;
      }
      case Mode::kNedVelYawRate: {
        const Vec3 a = velocity_to_accel_v1({v[0], v[1], v[2]}, est, dt);
        v = {a.x(), a.y(), a.z(), v[3]};
        mode = 2;
        continue;
      }
      case Mode::kNePosDVelYaw: {
        const Vec3 vel = position_to_velocity({v[0], v[1], 0.0}, Vec3(1, 1, 0), est, dt);
        v = {vel.x(), vel.y(), v[2], yaw_to_rate(v[3], est, dt)};
        mode = 3;
        continue;
      }
      case Mode::kRollPitchYawThrottle:
        out = FirmwareCommand::angle(std::clamp(v[3], 0.0, 1.0), v[0], v[1], yaw_to_rate(v[2], est, dt));
        break;
      case Mode::kRollPitchRateThrottle:
        out = FirmwareCommand::angle(std::clamp(v[3], 0.0, 1.0), v[0], v[1], v[2]);
        break;
      case Mode::kRatesThrottle:
        out = FirmwareCommand::rate(std::clamp(v[3], 0.0, 1.0), v[0], v[1], v[2]);
        break;
      case Mode::kPassThrough:
        out = FirmwareCommand::pass_through(v[0], v[1], v[2], v[3]);
        break;
      case Mode::kRollPitchYawThrust:
        v = {v[0], v[1], yaw_to_rate(v[2], est, dt), v[3]};
        mode = 10;
        continue;
      case Mode::kRollPitchRateThrust: {
        const auto [p, q] = attitude_loop(v[0], v[1], est, dt);
        v = {p, q, v[2], v[3]};
        mode = 11;
        continue;
      }
      case Mode::kRatesThrust: {
        const Vec3 tau = rate_loop(v[0], v[1], v[2], est.rates, dt);
        v = {v[3], tau.x(), tau.y(), tau.z()};
        mode = 8;
        continue;
      }
    }
    break;
  }
  out.stamp = now;
  return out;
}

}  // namespace rotor::ctrl
