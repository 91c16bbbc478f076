#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sortcell/arduino.hpp"

namespace sortcell {

enum class Direction { RobotToPlc, PlcToRobot };

std::string_view to_string(Direction d) noexcept;

inline constexpr std::size_t kAssemblyWords = 4;
using Words = std::array<std::uint16_t, kAssemblyWords>;

struct BitAddress {
  int word = 0;
  int bit = 0;

  friend bool operator==(const BitAddress&, const BitAddress&) = default;
};

struct BitAlias {
  BitAddress address;
  std::string_view name;
};

/// Canonical bit names of the robot input (RobotToPlc) and output
/// (PlcToRobot) assemblies. Bits not listed are reserved and stay zero.
std::span<const BitAlias> alias_table(Direction d) noexcept;
std::optional<BitAddress> find_alias(Direction d, std::string_view name) noexcept;

/// Sets 2^bit for each named bit. Throws UnknownAlias.
Words pack(Direction d, std::span<const std::string> names);
/// Names of the set alias bits, in table order.
std::vector<std::string> unpack(Direction d, const Words& words);
bool reserved_bits_clear(Direction d, const Words& words) noexcept;

class TagAssembly {
 public:
  explicit TagAssembly(Direction d) : direction_(d) {}

  Direction direction() const noexcept { return direction_; }
  const Words& words() const noexcept { return words_; }

  bool get(std::string_view name) const;
  void set(std::string_view name, bool value);
  bool bit(BitAddress a) const noexcept;
  void set_bit(BitAddress a, bool value) noexcept;
  std::vector<std::string> decoded() const { return unpack(direction_, words_); }

  friend bool operator==(const TagAssembly&, const TagAssembly&) = default;

 private:
  Direction direction_;
  Words words_{};
};

enum class Endpoint { Plc, Robot };

struct BusConfig {
  std::int64_t rpi_us = 10'000;
  /// Whole RPI periods of additional delivery delay (robustness knob).
  int extra_latency_ticks = 0;

  friend bool operator==(const BusConfig&, const BusConfig&) = default;
};

/// A consumer image that changed during one exchange.
struct Delivery {
  Direction direction;
  Words before;
  Words after;
};

/// Cyclic implicit I/O between the PLC and the robot controller. Each tick
/// copies every producer snapshot to the matching consumer image.
class IoBus {
 public:
  explicit IoBus(BusConfig config = {});

  void register_endpoint(Endpoint e);
  bool registered(Endpoint e) const noexcept;

  /// Assembly written by `e`: RobotToPlc for the robot, PlcToRobot for the PLC.
  TagAssembly& producer(Endpoint e);
  const TagAssembly& producer_view(Endpoint e) const;
  /// Last delivered image that `e` consumes.
  const TagAssembly& consumer_image(Endpoint e) const;

  /// One RPI tick. Returns the consumer images that changed.
  std::vector<Delivery> exchange();

  const BusConfig& config() const noexcept { return config_; }

 private:
  void require(Endpoint e) const;

  BusConfig config_;
  bool plc_registered_ = false;
  bool robot_registered_ = false;
  TagAssembly robot_out_{Direction::RobotToPlc};
  TagAssembly plc_out_{Direction::PlcToRobot};
  TagAssembly plc_image_{Direction::RobotToPlc};
  TagAssembly robot_image_{Direction::PlcToRobot};
  std::deque<std::pair<Words, Words>> in_flight_;
};

/// Where a robot digital output is wired.
enum class DoSink { Assembly, ArduinoInputA, ArduinoInputB, Suction };

struct DoCoupling {
  int do_index;
  std::string_view label;
  DoSink sink;
  BitAddress address{};  // meaningful for Assembly sinks
};

/// Discrete and word couplings of the cell.
struct WiringMap {
  std::vector<DoCoupling> robot_outputs;
  // The sort program branches to the conveyor pulse when DI[121] is ON, so
  // the input follows the keep verdict.
  int remove_part_di = 121;
  std::string_view remove_part_source = "Part match";
  std::string_view beam_input = "Local:1:I.Data.14";

  const DoCoupling* for_do(int do_index) const noexcept;
  /// Throws Error when a DO is wired twice or a bit is used twice.
  void validate() const;
};

const WiringMap& default_wiring();

/// Relay between a 24 V robot output and a pulled-up 5 V input: an energized
/// output pulls the line Low.
constexpr LineLevel relay_line(bool do_on) noexcept { return do_on ? LineLevel::Low : LineLevel::High; }

/// Inert network metadata carried for fidelity; never used for routing.
struct NetworkConfig {
  std::string robot_ip = "192.168.0.10";
  std::string plc_ip = "192.168.0.20";
  std::string pc_ip = "192.168.0.30";
  std::string vision_ip = "192.168.0.40";
  std::string subnet_mask = "255.255.0.0";
  int word_length = 4;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

}  // namespace sortcell
