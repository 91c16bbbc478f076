#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sortcell/tp/program.hpp"
#include "sortcell/vision.hpp"
#include "sortcell/workcell.hpp"

namespace sortcell::tp {

/// Digital I/O tables of the controller. Unset indices read OFF.
struct RobotIO {
  std::map<int, bool> do_table;
  std::map<int, bool> di_table;

  bool get_do(int index) const noexcept;
  bool get_di(int index) const noexcept;
};

inline constexpr int kVisionRegisterCount = 10;

struct RobotRegisters {
  std::array<VisionRegister, kVisionRegisterCount + 1> vr{};  // 1-based
  std::array<bool, kVisionRegisterCount + 1> vr_loaded{};
  std::map<int, Pose> pr;  // position registers
  std::map<int, Pose> p;   // program-local taught points
  int uframe = 0;
  int utool = 0;
};

/// Default registers: PR[80] vision reference over the camera center at the
/// block's top face, PR[81] a pure +Z approach offset, P[1] over the reject bin.
RobotRegisters default_registers(double camera_x_mm = 580.0, double part_top_mm = 40.0);

enum class MotionKind { Joint, Linear };

struct MotionTiming {
  double joint_move_s = 2.0;
  double vision_processing_s = 0.05;

  friend bool operator==(const MotionTiming&, const MotionTiming&) = default;
};

/// What the interpreter needs from the controller and the cell.
class RobotEnvironment {
 public:
  virtual ~RobotEnvironment() = default;

  virtual void set_do(int index, std::string_view label, bool value) = 0;
  virtual bool get_di(int index) const = 0;
  /// Grabs a frame through the current filter/light and runs the process.
  virtual VisionRegister run_find(std::string_view process) = 0;
  virtual Pose tool_pose() const = 0;
  virtual bool in_workspace(const Pose& target) const = 0;
  /// Starts a move that lasts `duration_s`; the tool is at `target` when it ends.
  virtual void begin_motion(MotionKind kind, const Pose& target, double duration_s) = 0;
  virtual void set_frames(int /*uframe*/, int /*utool*/) {}
};

struct StepResult {
  enum class Kind { Blocked, Completed };
  Kind kind = Kind::Completed;
  std::int64_t wait_us = 0;  // time until resume() should be called again
};

/// Resumable executor for one program. resume() runs statements until one
/// consumes time (WAIT, VISION RUN_FIND processing, motion) or the program ends.
class Interpreter {
 public:
  Interpreter(const TpProgram& program, RobotRegisters& registers, MotionTiming timing = {});

  StepResult resume(RobotEnvironment& env);

  bool finished() const noexcept { return finished_; }
  /// Index of the statement that is executing (or will execute next).
  std::size_t statement_index() const noexcept { return current_; }
  const TpProgram& program() const noexcept { return *program_; }

  /// Called with each statement index right before it executes.
  std::function<void(std::size_t)> on_statement;

 private:
  Pose resolve_target(const MotionTarget& t, const std::string& text) const;

  const TpProgram* program_;
  RobotRegisters* regs_;
  MotionTiming timing_;
  std::size_t pc_ = 0;
  std::size_t current_ = 0;
  bool finished_ = false;
  std::map<std::string, VisionRegister, std::less<>> last_find_;
};

std::int64_t seconds_to_us(double s) noexcept;

/// Environment with its own clock, for running a program outside the engine.
class StandaloneEnvironment : public RobotEnvironment {
 public:
  virtual std::int64_t now_us() const = 0;
  virtual void elapse(std::int64_t us) = 0;
};

struct ExecRecord {
  std::int64_t t_us = 0;
  std::size_t statement = 0;
  std::string text;

  friend bool operator==(const ExecRecord&, const ExecRecord&) = default;
};

/// Runs the program to completion, advancing the environment clock through
/// every blocking statement. Returns one record per executed statement.
std::vector<ExecRecord> execute(const TpProgram& program, RobotRegisters& registers,
                                StandaloneEnvironment& env, MotionTiming timing = {});

}  // namespace sortcell::tp
