#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sortcell/arduino.hpp"
#include "sortcell/iobus.hpp"
#include "sortcell/optics.hpp"
#include "sortcell/tp/interpreter.hpp"
#include "sortcell/workcell.hpp"

namespace sortcell::sim {

inline constexpr int kScenarioSchemaVersion = 1;

struct PartSpec {
  double t_s = 0.0;
  ColorClass color = ColorClass::Red;
  double y_mm = 0.0;
  double rz_deg = 0.0;

  friend bool operator==(const PartSpec&, const PartSpec&) = default;
};

/// Random part feeder. Intervals are the minimum spacing plus an
/// exponential extra with the given mean.
struct SpawnerSpec {
  int count = 0;
  double start_s = 0.0;
  double extra_interval_mean_s = 1.0;
  double red_weight = 1.0;
  double green_weight = 1.0;
  double blue_weight = 1.0;
  double y_max_mm = 0.0;
  double rz_max_deg = 0.0;

  friend bool operator==(const SpawnerSpec&, const SpawnerSpec&) = default;
};

/// Operator writes an input tag (pushbutton or HMI tag) at time t.
struct OperatorAction {
  double t_s = 0.0;
  std::string tag;
  bool value = false;

  friend bool operator==(const OperatorAction&, const OperatorAction&) = default;
};

struct VisionParams {
  double find_threshold_delta = 0.15;
  int min_area_px = 3200;
  int max_area_px = 12800;
  double segmentation_delta = 0.01;

  friend bool operator==(const VisionParams&, const VisionParams&) = default;
};

struct PlcParams {
  int scan_ms = 10;
  int t1_preset_ms = 200;

  friend bool operator==(const PlcParams&, const PlcParams&) = default;
};

struct RobotParams {
  tp::MotionTiming timing{};
  double pick_tolerance_mm = 10.0;
  bool initial_fault = false;

  friend bool operator==(const RobotParams&, const RobotParams&) = default;
};

struct SimParams {
  std::int64_t physics_tick_us = 1000;
  double deadlock_timeout_s = 30.0;

  friend bool operator==(const SimParams&, const SimParams&) = default;
};

struct ScenarioParams {
  ConveyorState conveyor{};
  OpticsParams optics{};
  CameraConfig camera{};
  VisionParams vision{};
  ArduinoConfig arduino{};
  BusConfig bus{};
  PlcParams plc{};
  RobotParams robot{};
  SimParams sim{};
  Workspace workspace{};
  double part_size_mm = 40.0;

  friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  double duration_s = 60.0;
  ColorFlags selected{};
  bool override_enabled = false;
  bool auto_start = true;
  std::vector<PartSpec> parts;
  std::optional<SpawnerSpec> spawner;
  std::vector<OperatorAction> script;
  ScenarioParams params{};
  NetworkConfig network{};

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Center-to-center belt spacing that keeps a waiting part out of the
/// camera field while the previous one is scanned.
double min_part_spacing_mm(const ScenarioParams& p) noexcept;
double min_spawn_interval_s(const ScenarioParams& p) noexcept;

/// Throws ScenarioInvalid naming the offending field.
void validate(const Scenario& s);

/// Explicit parts merged with the spawner output, ordered by time.
std::vector<PartSpec> spawn_schedule(const Scenario& s);

}  // namespace sortcell::sim
