#include "rotor/runtime/messages.hpp"

namespace rotor::rt {

namespace {

void push(std::vector<double>& row, const Vec3& v) { row.insert(row.end(), {v.x(), v.y(), v.z()}); }

Vec3 vec3(const double* d) { return {d[0], d[1], d[2]}; }

std::vector<Column> triple(const std::string& prefix, const char* a, const char* b, const char* c,
                           const std::string& unit) {
  return {{prefix + a, unit}, {prefix + b, unit}, {prefix + c, unit}};
}

std::vector<Column> concat(std::initializer_list<std::vector<Column>> parts) {
  std::vector<Column> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

const std::vector<Column>& MessageTraits<ImuMsg>::columns() {
  static const auto c = concat({triple("accel_", "x", "y", "z", "m/s^2"), triple("gyro_", "x", "y", "z", "rad/s")});
  return c;
}
void MessageTraits<ImuMsg>::flatten(const ImuMsg& m, std::vector<double>& row) {
  row.push_back(m.stamp);
  push(row, m.accel);
  push(row, m.gyro);
}
ImuMsg MessageTraits<ImuMsg>::unflatten(const double* d) { return {d[0], vec3(d + 1), vec3(d + 4)}; }

const std::vector<Column>& MessageTraits<BaroMsg>::columns() {
  static const std::vector<Column> c{{"pressure", "Pa"}};
  return c;
}
void MessageTraits<BaroMsg>::flatten(const BaroMsg& m, std::vector<double>& row) {
  row.insert(row.end(), {m.stamp, m.pressure});
}
BaroMsg MessageTraits<BaroMsg>::unflatten(const double* d) { return {d[0], d[1]}; }

const std::vector<Column>& MessageTraits<MagMsg>::columns() {
  static const auto c = triple("field_", "x", "y", "z", "1");
  return c;
}
void MessageTraits<MagMsg>::flatten(const MagMsg& m, std::vector<double>& row) {
  row.push_back(m.stamp);
  push(row, m.field);
}
MagMsg MessageTraits<MagMsg>::unflatten(const double* d) { return {d[0], vec3(d + 1)}; }

const std::vector<Column>& MessageTraits<GnssMsg>::columns() {
  static const auto c = concat({{{"lat", "rad"}, {"lon", "rad"}, {"alt", "m"}}, triple("vel_", "n", "e", "d", "m/s")});
  return c;
}
void MessageTraits<GnssMsg>::flatten(const GnssMsg& m, std::vector<double>& row) {
  row.insert(row.end(), {m.stamp, m.lat, m.lon, m.alt});
  push(row, m.vel_ned);
}
GnssMsg MessageTraits<GnssMsg>::unflatten(const double* d) { return {d[0], d[1], d[2], d[3], vec3(d + 4)}; }

const std::vector<Column>& MessageTraits<TruthMsg>::columns() {
  static const auto c = concat({triple("p_", "n", "e", "d", "m"), triple("v_", "u", "v", "w", "m/s"),
                                {{"roll", "rad"}, {"pitch", "rad"}, {"yaw", "rad"}},
                                triple("omega_", "p", "q", "r", "rad/s"), triple("v_", "n", "e", "d", "m/s"),
                                {{"on_ground", "bool"}}});
  return c;
}
void MessageTraits<TruthMsg>::flatten(const TruthMsg& m, std::vector<double>& row) {
  row.push_back(m.stamp);
  push(row, m.p);
  push(row, m.v_b);
  push(row, m.att.vec());
  push(row, m.omega);
  push(row, m.v_ned);
  row.push_back(m.on_ground ? 1.0 : 0.0);
}
TruthMsg MessageTraits<TruthMsg>::unflatten(const double* d) {
  return {d[0], vec3(d + 1), vec3(d + 4), EulerAngles::from(vec3(d + 7)), vec3(d + 10), vec3(d + 13), d[16] != 0.0};
}

const std::vector<Column>& MessageTraits<MotorMsg>::columns() {
  static const std::vector<Column> c{
      {"thrust_fr", "N"}, {"thrust_bl", "N"}, {"thrust_fl", "N"}, {"thrust_br", "N"}, {"saturated", "bool"}};
  return c;
}
void MessageTraits<MotorMsg>::flatten(const MotorMsg& m, std::vector<double>& row) {
  row.push_back(m.stamp);
  row.insert(row.end(), m.thrust.begin(), m.thrust.end());
  row.push_back(m.saturated ? 1.0 : 0.0);
}
MotorMsg MessageTraits<MotorMsg>::unflatten(const double* d) {
  return {d[0], {d[1], d[2], d[3], d[4]}, d[5] != 0.0};
}

const std::vector<Column>& MessageTraits<EstimateMsg>::columns() {
  static const auto c = [] {
    auto out = concat({triple("p_", "n", "e", "d", "m"), triple("v_", "u", "v", "w", "m/s"),
                       {{"roll", "rad"}, {"pitch", "rad"}, {"yaw", "rad"}},
                       triple("bias_", "p", "q", "r", "rad/s"), triple("rate_", "p", "q", "r", "rad/s")});
    const char* names[] = {"p_n", "p_e", "p_d", "v_u", "v_v", "v_w", "roll", "pitch", "yaw", "bias_p", "bias_q", "bias_r"};
    const char* units[] = {"m^2", "m^2", "m^2", "m^2/s^2", "m^2/s^2", "m^2/s^2", "rad^2", "rad^2", "rad^2",
                           "rad^2/s^2", "rad^2/s^2", "rad^2/s^2"};
    for (int i = 0; i < est::kStateDim; ++i) out.push_back({std::string("var_") + names[i], units[i]});
    return out;
  }();
  return c;
}
void MessageTraits<EstimateMsg>::flatten(const EstimateMsg& m, std::vector<double>& row) {
  row.push_back(m.stamp);
  const est::StateVec x = m.x.to_vec();
  row.insert(row.end(), x.data(), x.data() + est::kStateDim);
  push(row, m.rates);
  row.insert(row.end(), m.P_diag.data(), m.P_diag.data() + est::kStateDim);
}
EstimateMsg MessageTraits<EstimateMsg>::unflatten(const double* d) {
  EstimateMsg m;
  m.stamp = d[0];
  m.x = est::StateVector::from_vec(Eigen::Map<const est::StateVec>(d + 1));
  m.rates = vec3(d + 13);
  m.P_diag = Eigen::Map<const est::StateVec>(d + 16);
  return m;
}

const std::vector<Column>& MessageTraits<SetpointMsg>::columns() {
  static const auto c = concat({triple("p_", "n", "e", "d", "m"), triple("v_", "n", "e", "d", "m/s"),
                                triple("a_", "n", "e", "d", "m/s^2"),
                                {{"yaw", "rad"}, {"yaw_rate", "rad/s"}, {"yaw_accel", "rad/s^2"}},
                                {{"phase", "enum"}, {"leg", "index"}},
                                triple("start_", "n", "e", "d", "m"), {{"start_heading", "rad"}},
                                triple("end_", "n", "e", "d", "m"), {{"end_heading", "rad"}}});
  return c;
}
void MessageTraits<SetpointMsg>::flatten(const SetpointMsg& m, std::vector<double>& row) {
  row.push_back(m.stamp);
  push(row, m.sp.p);
  push(row, m.sp.v);
  push(row, m.sp.a);
  row.insert(row.end(), {m.sp.yaw, m.sp.yaw_rate, m.sp.yaw_accel, static_cast<double>(m.phase),
                         static_cast<double>(m.leg)});
  push(row, m.leg_start.p);
  row.push_back(m.leg_start.heading);
  push(row, m.leg_end.p);
  row.push_back(m.leg_end.heading);
}
SetpointMsg MessageTraits<SetpointMsg>::unflatten(const double* d) {
  SetpointMsg m;
  m.stamp = d[0];
  m.sp.p = vec3(d + 1);
  m.sp.v = vec3(d + 4);
  m.sp.a = vec3(d + 7);
  m.sp.yaw = d[10];
  m.sp.yaw_rate = d[11];
  m.sp.yaw_accel = d[12];
  m.phase = static_cast<int>(d[13]);
  m.leg = static_cast<int>(d[14]);
  m.leg_start = {vec3(d + 15), d[18]};
  m.leg_end = {vec3(d + 19), d[22]};
  return m;
}

const std::vector<Column>& MessageTraits<ControlMsg>::columns() {
  static const std::vector<Column> c{{"mode", "enum"}, {"x1", ""}, {"x2", ""}, {"x3", ""}, {"x4", ""}};
  return c;
}
void MessageTraits<ControlMsg>::flatten(const ControlMsg& m, std::vector<double>& row) {
  row.insert(row.end(), {m.stamp, static_cast<double>(m.mode)});
  row.insert(row.end(), m.values.begin(), m.values.end());
}
ControlMsg MessageTraits<ControlMsg>::unflatten(const double* d) {
  return {d[0], static_cast<int>(d[1]), {d[2], d[3], d[4], d[5]}};
}

const std::vector<Column>& MessageTraits<FirmwareMsg>::columns() {
  static const auto c = [] {
    std::vector<Column> out{{"kind", "enum"}};
    for (int i = 0; i < 10; ++i) out.push_back({"u" + std::to_string(i), ""});
    return out;
  }();
  return c;
}
void MessageTraits<FirmwareMsg>::flatten(const FirmwareMsg& m, std::vector<double>& row) {
  row.insert(row.end(), {m.stamp, static_cast<double>(m.kind)});
  row.insert(row.end(), m.u.begin(), m.u.end());
}
FirmwareMsg MessageTraits<FirmwareMsg>::unflatten(const double* d) {
  FirmwareMsg m;
  m.stamp = d[0];
  m.kind = static_cast<ctrl::FirmwareKind>(static_cast<int>(d[1]));
  for (int i = 0; i < 10; ++i) m.u[i] = d[2 + i];
  return m;
}

}  // namespace rotor::rt
