#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sortcell/arduino.hpp"
#include "sortcell/iobus.hpp"
#include "sortcell/tp/interpreter.hpp"

namespace sortcell::tp {

/// Scan program as listed for the cell, verbatim.
std::string_view scanpart_source() noexcept;
/// Sort program as listed for the cell, verbatim.
std::string_view sortpart_source() noexcept;

const TpProgram& scanpart();
const TpProgram& sortpart();

struct DoEvent {
  std::int64_t t_us = 0;
  int index = 0;
  bool value = false;

  friend bool operator==(const DoEvent&, const DoEvent&) = default;
};

/// Robot-side bench: a stationary scene under the camera, the filter wheel
/// and LED ring, the suction cup and reject bin, on a private clock. Used to
/// run the robot programs without the PLC or the belt.
class BenchCell : public StandaloneEnvironment {
 public:
  BenchCell();

  // Scene and configuration; mutate before running.
  std::vector<Part> parts;
  OpticsParams optics;
  CameraConfig camera;
  std::map<std::string, VisionProcess, std::less<>> processes;
  bool led_enabled = true;
  RobotIO io;
  Pose tool{580.0, 300.0, 220.0, 0.0};
  Workspace workspace;
  RejectBin bin;
  double pick_tolerance_mm = 10.0;

  const ArduinoNode& arduino() const noexcept { return arduino_; }
  const std::vector<DoEvent>& do_log() const noexcept { return do_log_; }
  const std::vector<std::pair<std::int64_t, Pose>>& motion_log() const noexcept { return motions_; }

  void set_do(int index, std::string_view label, bool value) override;
  bool get_di(int index) const override { return io.get_di(index); }
  VisionRegister run_find(std::string_view process) override;
  Pose tool_pose() const override { return tool; }
  bool in_workspace(const Pose& target) const override { return workspace.contains(target); }
  void begin_motion(MotionKind kind, const Pose& target, double duration_s) override;
  std::int64_t now_us() const override { return now_us_; }
  void elapse(std::int64_t us) override;

 private:
  void on_suction(bool on);

  ArduinoNode arduino_;
  std::int64_t now_us_ = 0;
  std::vector<DoEvent> do_log_;
  std::vector<std::pair<std::int64_t, Pose>> motions_;
  std::optional<std::size_t> held_;
  std::optional<Pose> pending_target_;
  std::int64_t motion_end_us_ = 0;
};

/// Default vision processes for REDSCAN, GRNSCAN and BLUSCAN.
std::map<std::string, VisionProcess, std::less<>> default_processes();

/// Runs the scan program on a stationary scene and returns the color flags
/// it latched (DO[123], DO[124], DO[125]).
ColorFlags scan_cycle_sequence(BenchCell& env, MotionTiming timing = {});

}  // namespace sortcell::tp
