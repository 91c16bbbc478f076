#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sortcell::plc {

enum class TagKind { LocalInput, HmiInput, Internal, LocalOutput, RobotInput, RobotOutput };

std::string_view to_string(TagKind k) noexcept;
std::optional<TagKind> parse_tag_kind(std::string_view s) noexcept;
/// Inputs are frozen for the scan; rungs may not write them.
bool is_input(TagKind k) noexcept;

struct TagDef {
  std::string name;
  std::string address;
  TagKind kind = TagKind::Internal;
  std::string alias;  // assembly bit name for RobotInput/RobotOutput tags

  friend bool operator==(const TagDef&, const TagDef&) = default;
};

struct TimerDef {
  std::string name;
  int preset_ms = 0;

  friend bool operator==(const TimerDef&, const TimerDef&) = default;
};

/// Contact network: examine-on/examine-off contacts, one-shots, and series
/// or parallel groups of sub-networks. An empty series conducts.
struct Network {
  enum class Kind { Xic, Xio, Ons, Series, Parallel };

  Kind kind = Kind::Series;
  std::string tag;
  std::vector<Network> children;

  static Network xic(std::string tag) { return {Kind::Xic, std::move(tag), {}}; }
  static Network xio(std::string tag) { return {Kind::Xio, std::move(tag), {}}; }
  static Network ons(std::string tag) { return {Kind::Ons, std::move(tag), {}}; }
  static Network series(std::vector<Network> c) { return {Kind::Series, {}, std::move(c)}; }
  static Network parallel(std::vector<Network> c) { return {Kind::Parallel, {}, std::move(c)}; }
  static Network always() { return series({}); }

  friend bool operator==(const Network&, const Network&) = default;
};

/// Output instruction, optionally on its own branch condition in series
/// after the rung condition.
struct Output {
  enum class Kind { Ote, Otl, Otu, Ton };

  Kind kind = Kind::Ote;
  std::string tag;
  std::optional<Network> when;

  friend bool operator==(const Output&, const Output&) = default;
};

struct Rung {
  int number = 0;
  std::string comment;
  Network condition = Network::always();
  std::vector<Output> outputs;

  friend bool operator==(const Rung&, const Rung&) = default;
};

struct LadderProgram {
  std::string name;
  std::vector<TagDef> tags;
  std::vector<TimerDef> timers;
  std::vector<Rung> rungs;

  friend bool operator==(const LadderProgram&, const LadderProgram&) = default;
};

/// Accumulating on-delay timer state.
struct TimerState {
  int preset_ms = 0;
  int acc_ms = 0;
  bool en = false;
  bool tt = false;
  bool dn = false;

  friend bool operator==(const TimerState&, const TimerState&) = default;
};

/// Bit and timer values of one controller. Timer bits read as "T1.DN",
/// "T1.TT" and "T1.EN".
class TagDatabase {
 public:
  TagDatabase() = default;
  explicit TagDatabase(const LadderProgram& program);

  bool has(std::string_view name) const noexcept;
  bool get(std::string_view name) const;
  void set(std::string_view name, bool value);

  const TimerState& timer(std::string_view name) const;
  TimerState& timer(std::string_view name);

  const TagDef* def(std::string_view name) const noexcept;
  const TagDef* by_address(std::string_view address) const noexcept;

  const std::map<std::string, bool, std::less<>>& bits() const noexcept { return bits_; }
  const std::map<std::string, TimerState, std::less<>>& timers() const noexcept { return timers_; }

  friend bool operator==(const TagDatabase& a, const TagDatabase& b) {
    return a.bits_ == b.bits_ && a.timers_ == b.timers_;
  }

 private:
  std::map<std::string, bool, std::less<>> bits_;
  std::map<std::string, TimerState, std::less<>> timers_;
  std::map<std::string, TagDef, std::less<>> defs_;
};

/// Structural checks: every referenced tag exists, no rung writes an input,
/// no OTE coil or timer is driven by two rungs, timer references name
/// declared timers. Throws FormatError.
void validate(const LadderProgram& program);

/// One scan: rungs evaluated top to bottom against the current database.
/// Inputs must already hold the frozen input image; timers advance by
/// `period_ms`.
void scan_once(const LadderProgram& program, TagDatabase& tags, int period_ms);

/// The reconstructed cell program (validated).
const LadderProgram& default_program();
std::string_view default_program_json() noexcept;

}  // namespace sortcell::plc
