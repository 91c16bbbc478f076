#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sortcell/plc/ladder.hpp"
#include "sortcell/sim/command.hpp"
#include "sortcell/sim/scenario.hpp"

namespace sortcell::sim {

enum class Source { Bus, Plc, Robot, Arduino, Workcell, Operator };

std::string_view to_string(Source s) noexcept;

// Event kinds written to the trace.
namespace kind {
inline constexpr const char* TagChange = "TagChange";
inline constexpr const char* PartSpawn = "PartSpawn";
inline constexpr const char* PartState = "PartState";
inline constexpr const char* BeamEdge = "BeamEdge";
inline constexpr const char* ProgramStart = "ProgramStart";
inline constexpr const char* ProgramEnd = "ProgramEnd";
inline constexpr const char* ProgramPaused = "ProgramPaused";
inline constexpr const char* ProgramResumed = "ProgramResumed";
inline constexpr const char* VisionResult = "VisionResult";
inline constexpr const char* MotionStart = "MotionStart";
inline constexpr const char* MotionEnd = "MotionEnd";
inline constexpr const char* VerdictIssued = "VerdictIssued";
inline constexpr const char* ServoSettled = "ServoSettled";
inline constexpr const char* RobotFault = "RobotFault";
inline constexpr const char* Command = "Command";
}  // namespace kind

struct TraceEvent {
  std::uint64_t seq = 0;
  std::int64_t t_us = 0;
  std::string src;
  std::string kind;
  nlohmann::ordered_json data;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Per-part bookkeeping for metrics.
struct PartRecord {
  int id = 0;
  ColorClass color = ColorClass::Unknown;
  double y_mm = 0.0;
  std::int64_t spawn_us = 0;
  std::optional<std::int64_t> beam_us;
  std::optional<std::int64_t> verdict_us;
  std::optional<std::int64_t> sorted_us;  // sort program finished
  std::optional<bool> keep;               // verdict
  std::optional<bool> expected_keep;      // true color against the selection at verdict time
  ColorFlags detected{};
  PartState state = PartState::OnBelt;

  friend bool operator==(const PartRecord&, const PartRecord&) = default;
};

struct ColorCounts {
  int kept = 0;
  int removed = 0;
  friend bool operator==(const ColorCounts&, const ColorCounts&) = default;
};

struct Metrics {
  std::int64_t sim_time_us = 0;
  int parts_spawned = 0;
  int parts_kept = 0;
  int parts_removed = 0;
  int parts_on_belt = 0;
  std::map<std::string, ColorCounts> by_color;
  int misclassified = 0;
  int verdicts = 0;
  int runtime_faults = 0;
  double mean_cycle_time_s = 0.0;
  double min_verdict_latency_s = 0.0;
  std::vector<int> reject_bin;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

nlohmann::ordered_json to_json(const Metrics& m);

enum class RobotPhase { Idle, Scanning, AwaitVerdict, Sorting, Faulted };
std::string_view to_string(RobotPhase p) noexcept;

struct RobotView {
  RobotPhase phase = RobotPhase::Idle;
  bool permitted = false;
  bool paused = false;
  std::string program;
  std::size_t statement_index = 0;
  std::string statement;
  Pose tool{};
  std::optional<int> held_part;
  std::map<int, bool> do_table;
  std::string fault;
};

/// Argument checks shared by Engine::submit and the service front end.
/// Throws CommandError.
void check_command(const Command& c, const ScenarioParams& params);

namespace detail {
struct Cell;
}

/// Deterministic discrete-event simulation of the whole cell. Time is in
/// integer microseconds; events at equal time run in node order bus, PLC,
/// robot, Arduino, workcell, then by scheduling order.
class Engine {
 public:
  /// Validates the scenario (ScenarioInvalid).
  explicit Engine(Scenario scenario);
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  /// Processes every event with t <= until_us and leaves the clock there.
  void step(std::int64_t until_us);
  /// Runs to the scenario duration or until every scheduled part is done.
  /// Throws DeadlockDetected.
  void run();

  /// Queued; applied at the next PLC scan boundary.
  void submit(const Command& c);

  std::int64_t now_us() const noexcept;
  bool finished() const noexcept;
  bool deadlocked() const noexcept;

  const Scenario& scenario() const noexcept;
  const std::vector<TraceEvent>& trace() const noexcept;
  Metrics metrics() const;
  const std::map<int, PartRecord>& part_records() const noexcept;

  // State views.
  const std::vector<Part>& parts() const noexcept;
  const ConveyorState& conveyor() const noexcept;
  const RejectBin& reject_bin() const noexcept;
  const IoBus& bus() const noexcept;
  const plc::TagDatabase& plc_tags() const noexcept;
  const ArduinoState& arduino() const noexcept;
  /// Servo angle as it would read now (the node itself updates lazily).
  double servo_angle_now() const noexcept;
  RobotView robot() const;
  bool beam() const noexcept;

 private:
  std::unique_ptr<detail::Cell> cell_;
};

}  // namespace sortcell::sim
