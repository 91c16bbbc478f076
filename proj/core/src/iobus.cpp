#include "sortcell/iobus.hpp"

#include <algorithm>
#include <set>

#include "sortcell/errors.hpp"

namespace sortcell {

namespace {

constexpr std::array kRobotToPlc{
    BitAlias{{0, 1}, "Cmd enabled"},   BitAlias{{0, 2}, "System ready"},
    BitAlias{{0, 3}, "Prg running"},   BitAlias{{0, 4}, "Prg paused"},
    BitAlias{{0, 5}, "Motion held"},   BitAlias{{0, 6}, "Fault"},
    BitAlias{{0, 7}, "At perch"},      BitAlias{{0, 8}, "TP enabled"},
    BitAlias{{0, 10}, "Red"},          BitAlias{{0, 11}, "Green"},
    BitAlias{{0, 12}, "Blue"},         BitAlias{{0, 13}, "Conveyor fwd"},
    BitAlias{{1, 1}, "Scan Done"},     BitAlias{{1, 12}, "Robot DO 141"},
};

constexpr std::array kPlcToRobot{
    BitAlias{{0, 0}, "IMSTP"},      BitAlias{{0, 1}, "HOLD"},
    BitAlias{{0, 2}, "SFSPD"},      BitAlias{{0, 3}, "Stop"},
    BitAlias{{0, 4}, "Fault Reset"}, BitAlias{{0, 5}, "Stat"},
    BitAlias{{0, 6}, "Part match"}, BitAlias{{0, 7}, "Enable"},
    BitAlias{{0, 8}, "Scan Program"}, BitAlias{{0, 9}, "Remove Program"},
};

std::uint16_t mask(int bit) { return static_cast<std::uint16_t>(1u << bit); }

}  // namespace

std::string_view to_string(Direction d) noexcept {
  return d == Direction::RobotToPlc ? "RobotToPlc" : "PlcToRobot";
}

std::span<const BitAlias> alias_table(Direction d) noexcept {
  if (d == Direction::RobotToPlc) return kRobotToPlc;
  return kPlcToRobot;
}

std::optional<BitAddress> find_alias(Direction d, std::string_view name) noexcept {
  for (const auto& a : alias_table(d))
    if (a.name == name) return a.address;
  return std::nullopt;
}

Words pack(Direction d, std::span<const std::string> names) {
  Words w{};
  for (const auto& n : names) {
    const auto addr = find_alias(d, n);
    if (!addr) throw UnknownAlias("no bit named '" + n + "' in " + std::string(to_string(d)));
    w[static_cast<std::size_t>(addr->word)] |= mask(addr->bit);
  }
  return w;
}

std::vector<std::string> unpack(Direction d, const Words& words) {
  std::vector<std::string> out;
  for (const auto& a : alias_table(d))
    if (words[static_cast<std::size_t>(a.address.word)] & mask(a.address.bit)) out.emplace_back(a.name);
  return out;
}

bool reserved_bits_clear(Direction d, const Words& words) noexcept {
  Words used{};
  for (const auto& a : alias_table(d)) used[static_cast<std::size_t>(a.address.word)] |= mask(a.address.bit);
  for (std::size_t i = 0; i < kAssemblyWords; ++i)
    if (words[i] & static_cast<std::uint16_t>(~used[i])) return false;
  return true;
}

bool TagAssembly::get(std::string_view name) const {
  const auto addr = find_alias(direction_, name);
  if (!addr) throw UnknownAlias("no bit named '" + std::string(name) + "'");
  return bit(*addr);
}

void TagAssembly::set(std::string_view name, bool value) {
  const auto addr = find_alias(direction_, name);
  if (!addr) throw UnknownAlias("no bit named '" + std::string(name) + "'");
  set_bit(*addr, value);
}

bool TagAssembly::bit(BitAddress a) const noexcept {
  return (words_[static_cast<std::size_t>(a.word)] & mask(a.bit)) != 0;
}

void TagAssembly::set_bit(BitAddress a, bool value) noexcept {
  auto& w = words_[static_cast<std::size_t>(a.word)];
  w = value ? static_cast<std::uint16_t>(w | mask(a.bit)) : static_cast<std::uint16_t>(w & ~mask(a.bit));
}

IoBus::IoBus(BusConfig config) : config_(config) {}

void IoBus::register_endpoint(Endpoint e) {
  (e == Endpoint::Plc ? plc_registered_ : robot_registered_) = true;
}

bool IoBus::registered(Endpoint e) const noexcept {
  return e == Endpoint::Plc ? plc_registered_ : robot_registered_;
}

void IoBus::require(Endpoint e) const {
  if (!registered(e))
    throw BusFault(std::string("endpoint ") + (e == Endpoint::Plc ? "plc" : "robot") + " is not registered");
}

TagAssembly& IoBus::producer(Endpoint e) {
  require(e);
  return e == Endpoint::Robot ? robot_out_ : plc_out_;
}

const TagAssembly& IoBus::producer_view(Endpoint e) const {
  require(e);
  return e == Endpoint::Robot ? robot_out_ : plc_out_;
}

const TagAssembly& IoBus::consumer_image(Endpoint e) const {
  require(e);
  return e == Endpoint::Plc ? plc_image_ : robot_image_;
}

std::vector<Delivery> IoBus::exchange() {
  require(Endpoint::Plc);
  require(Endpoint::Robot);
  in_flight_.emplace_back(robot_out_.words(), plc_out_.words());
  std::vector<Delivery> out;
  while (in_flight_.size() > static_cast<std::size_t>(config_.extra_latency_ticks)) {
    const auto [to_plc, to_robot] = in_flight_.front();
    in_flight_.pop_front();
    auto deliver = [&](TagAssembly& image, const Words& w) {
      if (image.words() == w) return;
      Delivery d{image.direction(), image.words(), w};
      image = TagAssembly(image.direction());
      for (std::size_t i = 0; i < kAssemblyWords; ++i)
        for (int b = 0; b < 16; ++b) image.set_bit({static_cast<int>(i), b}, (w[i] >> b) & 1u);
      out.push_back(d);
    };
    deliver(plc_image_, to_plc);
    deliver(robot_image_, to_robot);
  }
  return out;
}

const DoCoupling* WiringMap::for_do(int do_index) const noexcept {
  const auto it = std::find_if(robot_outputs.begin(), robot_outputs.end(),
                               [&](const DoCoupling& c) { return c.do_index == do_index; });
  return it == robot_outputs.end() ? nullptr : &*it;
}

void WiringMap::validate() const {
  std::set<int> dos;
  std::set<std::pair<int, int>> bits;
  std::set<DoSink> discrete;
  for (const auto& c : robot_outputs) {
    if (!dos.insert(c.do_index).second) throw Error("DO[" + std::to_string(c.do_index) + "] wired twice");
    if (c.sink == DoSink::Assembly) {
      if (!bits.insert({c.address.word, c.address.bit}).second)
        throw Error("assembly bit wired twice by DO[" + std::to_string(c.do_index) + "]");
      const bool named = std::any_of(kRobotToPlc.begin(), kRobotToPlc.end(),
                                     [&](const BitAlias& a) { return a.address == c.address; });
      if (!named) throw Error("DO[" + std::to_string(c.do_index) + "] drives a reserved bit");
    } else if (!discrete.insert(c.sink).second) {
      throw Error("discrete sink wired twice");
    }
  }
}

const WiringMap& default_wiring() {
  static const WiringMap wiring{
      {
          {123, "RED", DoSink::Assembly, {0, 10}},
          {124, "GREEN", DoSink::Assembly, {0, 11}},
          {125, "BLUE", DoSink::Assembly, {0, 12}},
          {126, "CONVEYOR FWD", DoSink::Assembly, {0, 13}},
          {130, "SCAN COMPLETE", DoSink::Assembly, {1, 1}},
          {110, "CALL GREEN", DoSink::ArduinoInputA, {}},
          {112, "CALL BLUE", DoSink::ArduinoInputB, {}},
          {111, "SUCTION CUP", DoSink::Suction, {}},
      },
      121,
      "Part match",
      "Local:1:I.Data.14",
  };
  return wiring;
}

}  // namespace sortcell
