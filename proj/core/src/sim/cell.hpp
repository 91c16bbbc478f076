#pragma once

// Engine internals shared by engine.cpp and robot_node.cpp.

#include <deque>
#include <memory>
#include <set>

#include "sortcell/sim/engine.hpp"
#include "sortcell/tp/interpreter.hpp"

namespace sortcell::sim::detail {

enum class Action { BusTick, PlcScan, RobotPoll, RobotWake, ServoSettle, PhysicsTick };

struct Scheduled {
  std::int64_t t_us = 0;
  int priority = 0;
  std::uint64_t seq = 0;
  Action action = Action::BusTick;
  std::uint64_t token = 0;

  bool operator<(const Scheduled& o) const noexcept {
    if (t_us != o.t_us) return t_us < o.t_us;
    if (priority != o.priority) return priority < o.priority;
    return seq < o.seq;
  }
};

struct Cell;

struct Motion {
  Pose from{};
  Pose to{};
  std::int64_t start_us = 0;
  std::int64_t end_us = 0;
};

/// Robot controller: dispatcher, interpreter and the I/O it drives.
class RobotNode final : public tp::RobotEnvironment {
 public:
  explicit RobotNode(Cell& cell);

  void poll();
  void wake(std::uint64_t token);
  RobotView view() const;
  const Pose& tool() const noexcept { return tool_; }
  RobotPhase phase() const noexcept { return phase_; }

  // tp::RobotEnvironment
  void set_do(int index, std::string_view label, bool value) override;
  bool get_di(int index) const override;
  VisionRegister run_find(std::string_view process) override;
  Pose tool_pose() const override { return tool_; }
  bool in_workspace(const Pose& target) const override;
  void begin_motion(tp::MotionKind kind, const Pose& target, double duration_s) override;

 private:
  bool image_bit(std::string_view alias) const;
  void start_program(const tp::TpProgram& program, RobotPhase phase);
  void run_interpreter();
  void finish_motion();
  void fault(const std::string& statement, const std::string& cause);
  void clear_fault();
  void publish_status();
  void suction(bool on);
  Pose tool_now() const;

  Cell& cell_;
  RobotPhase phase_ = RobotPhase::Idle;
  bool permitted_ = false;
  bool paused_ = false;
  bool fault_reset_seen_ = false;
  std::string fault_text_;
  tp::RobotRegisters regs_;
  std::unique_ptr<tp::Interpreter> interp_;
  std::uint64_t wake_token_ = 0;
  std::int64_t wake_at_us_ = 0;
  std::int64_t paused_remaining_us_ = 0;
  std::optional<Motion> motion_;
  Pose tool_{};
  std::optional<std::size_t> held_;  // index into cell.parts
  tp::RobotIO io_;
  std::map<std::string, VisionProcess, std::less<>> processes_;
};

struct Cell {
  explicit Cell(Scenario s);

  Scenario scenario;
  plc::LadderProgram ladder;
  std::int64_t now = 0;
  std::int64_t end_us = 0;
  std::uint64_t sched_seq = 0;
  std::set<Scheduled> queue;
  std::vector<TraceEvent> trace;
  std::int64_t last_event_us = 0;
  bool deadlock = false;
  bool budget_done = false;

  // Workcell.
  ConveyorState conveyor;
  bool belt_moving = false;  // run state over the current physics interval
  std::vector<Part> parts;
  RejectBin bin;
  bool beam = false;
  std::deque<PartSpec> pending_spawns;
  std::optional<std::size_t> last_spawned;
  int next_part_id = 1;
  int scheduled_total = 0;

  // Arduino.
  ArduinoNode arduino;
  std::int64_t arduino_synced_us = 0;
  std::uint64_t settle_token = 0;

  IoBus bus;

  // PLC.
  plc::TagDatabase tags;
  std::map<std::string, bool, std::less<>> operator_inputs;
  std::deque<Command> commands;
  std::vector<std::pair<std::int64_t, std::string>> releases;
  std::vector<OperatorAction> script;
  std::size_t script_pos = 0;

  std::unique_ptr<RobotNode> robot;

  // Bookkeeping.
  std::map<int, PartRecord> records;
  std::optional<int> scan_part;
  int runtime_faults = 0;

  void schedule(std::int64_t t_us, Action a, std::uint64_t token = 0);
  void log(Source src, const char* kind, nlohmann::ordered_json data);
  void sync_arduino();
  void drive_arduino(LineLevel a, LineLevel b);
  void update_beam();
  void set_part_state(std::size_t index, PartState s);
  std::optional<std::size_t> find_part(int id) const;

  void dispatch(const Scheduled& e);
  void bus_tick();
  void plc_scan();
  void physics_tick();
  void apply_command(const Command& c);
  void try_spawn();
  void check_progress();
};

nlohmann::ordered_json pose_json(const Pose& p);

}  // namespace sortcell::sim::detail
