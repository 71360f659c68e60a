#pragma once

#include "rotor/controller/types.hpp"
#include "rotor/estimator/types.hpp"
#include "rotor/navigation/trajectory.hpp"

#include <array>
#include <concepts>
#include <string>
#include <vector>

namespace rotor::rt {

struct Column {
  std::string name;
  std::string unit;
};

/// Specialized for every message type that can be written to a log.
/// columns() lists the payload after the leading time column.
template <class T>
struct MessageTraits;

template <class T>
concept Loggable = requires(const T& msg, std::vector<double>& row, const double* data) {
  { MessageTraits<T>::schema } -> std::convertible_to<const char*>;
  { MessageTraits<T>::columns() } -> std::convertible_to<const std::vector<Column>&>;
  MessageTraits<T>::flatten(msg, row);
  { MessageTraits<T>::unflatten(data) } -> std::same_as<T>;
};

using ImuMsg = est::ImuInput;
using BaroMsg = est::BaroMeasurement;
using MagMsg = est::MagMeasurement;
using GnssMsg = est::GnssMeasurement;
using ControlMsg = ctrl::ControlCommand;
using FirmwareMsg = ctrl::FirmwareCommand;

struct TruthMsg {
  double stamp = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 v_b = Vec3::Zero();
  EulerAngles att;
  Vec3 omega = Vec3::Zero();
  Vec3 v_ned = Vec3::Zero();
  bool on_ground = false;
};

struct MotorMsg {
  double stamp = 0.0;
  std::array<double, 4> thrust{};
  bool saturated = false;
};

struct EstimateMsg {
  double stamp = 0.0;
  est::StateVector x;
  Vec3 rates = Vec3::Zero();
  est::StateVec P_diag = est::StateVec::Zero();
};

struct SetpointMsg {
  double stamp = 0.0;
  nav::TrajectorySetpoint sp;
  int phase = 0;
  int leg = -1;
  nav::Waypoint leg_start;
  nav::Waypoint leg_end;
};

/// Waypoint list handed from the planner to the manager. Not logged.
struct MissionMsg {
  double stamp = 0.0;
  std::vector<nav::Waypoint> waypoints;
  double v_max = 0.0;
};

/// Runtime parameter change, applied at the next tick boundary. Not logged.
struct ParamMsg {
  double stamp = 0.0;
  std::string role;
  std::string key;
  double value = 0.0;
};

template <>
struct MessageTraits<ImuMsg> {
  static constexpr const char* schema = "imu/1";
  static const std::vector<Column>& columns();
  static void flatten(const ImuMsg& m, std::vector<double>& row);
  static ImuMsg unflatten(const double* d);
};

template <>
struct MessageTraits<BaroMsg> {
  static constexpr const char* schema = "baro/1";
  static const std::vector<Column>& columns();
  static void flatten(const BaroMsg& m, std::vector<double>& row);
  static BaroMsg unflatten(const double* d);
};

template <>
struct MessageTraits<MagMsg> {
  static constexpr const char* schema = "mag/1";
  static const std::vector<Column>& columns();
  static void flatten(const MagMsg& m, std::vector<double>& row);
  static MagMsg unflatten(const double* d);
};

template <>
struct MessageTraits<GnssMsg> {
  static constexpr const char* schema = "gnss/1";
  static const std::vector<Column>& columns();
  static void flatten(const GnssMsg& m, std::vector<double>& row);
  static GnssMsg unflatten(const double* d);
};

template <>
struct MessageTraits<TruthMsg> {
  static constexpr const char* schema = "truth/1";
  static const std::vector<Column>& columns();
  static void flatten(const TruthMsg& m, std::vector<double>& row);
  static TruthMsg unflatten(const double* d);
};

template <>
struct MessageTraits<MotorMsg> {
  static constexpr const char* schema = "motors/1";
  static const std::vector<Column>& columns();
  static void flatten(const MotorMsg& m, std::vector<double>& row);
  static MotorMsg unflatten(const double* d);
};

template <>
struct MessageTraits<EstimateMsg> {
  static constexpr const char* schema = "estimate/1";
  static const std::vector<Column>& columns();
  static void flatten(const EstimateMsg& m, std::vector<double>& row);
  static EstimateMsg unflatten(const double* d);
};

template <>
struct MessageTraits<SetpointMsg> {
  static constexpr const char* schema = "setpoint/1";
  static const std::vector<Column>& columns();
  static void flatten(const SetpointMsg& m, std::vector<double>& row);
  static SetpointMsg unflatten(const double* d);
};

template <>
struct MessageTraits<ControlMsg> {
  static constexpr const char* schema = "control_command/1";
  static const std::vector<Column>& columns();
  static void flatten(const ControlMsg& m, std::vector<double>& row);
  static ControlMsg unflatten(const double* d);
};

template <>
struct MessageTraits<FirmwareMsg> {
  static constexpr const char* schema = "firmware_command/1";
  static const std::vector<Column>& columns();
  static void flatten(const FirmwareMsg& m, std::vector<double>& row);
  static FirmwareMsg unflatten(const double* d);
};

static_assert(Loggable<ImuMsg> && Loggable<EstimateMsg> && Loggable<FirmwareMsg>);
static_assert(!Loggable<MissionMsg> && !Loggable<ParamMsg>);

// Topic names shared by the role interfaces.
namespace topics {
inline constexpr const char* kImu = "imu";
inline constexpr const char* kBaro = "baro";
inline constexpr const char* kMag = "mag";
inline constexpr const char* kGnss = "gnss";
inline constexpr const char* kTruth = "truth";
inline constexpr const char* kSimState = "sim_state";
inline constexpr const char* kMotors = "motors";
inline constexpr const char* kEstimate = "estimate";
inline constexpr const char* kMission = "mission";
inline constexpr const char* kSetpoint = "setpoint";
inline constexpr const char* kControl = "control_command";
inline constexpr const char* kFirmware = "firmware_command";
inline constexpr const char* kParams = "param_set";
}  // namespace topics

}  // namespace rotor::rt
