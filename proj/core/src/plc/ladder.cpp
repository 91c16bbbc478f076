#include "sortcell/plc/ladder.hpp"

#include <set>

#include "sortcell/errors.hpp"
#include "sortcell/iobus.hpp"

namespace sortcell::plc {

namespace {

constexpr std::string_view kTimerBits[] = {".DN", ".TT", ".EN"};

struct TimerBitRef {
  std::string_view timer;
  std::string_view bit;
};

std::optional<TimerBitRef> split_timer_bit(std::string_view name) {
  for (auto suffix : kTimerBits) {
    if (name.size() > suffix.size() && name.ends_with(suffix))
      return TimerBitRef{name.substr(0, name.size() - suffix.size()), suffix.substr(1)};
  }
  return std::nullopt;
}

bool eval(const Network& n, bool power, TagDatabase& tags) {
  switch (n.kind) {
    case Network::Kind::Xic: return power && tags.get(n.tag);
    case Network::Kind::Xio: return power && !tags.get(n.tag);
    case Network::Kind::Ons: {
      const bool out = power && !tags.get(n.tag);
      tags.set(n.tag, power);
      return out;
    }
    case Network::Kind::Series: {
      bool p = power;
      for (const auto& c : n.children) p = eval(c, p, tags);
      return p;
    }
    case Network::Kind::Parallel: {
      bool any = false;
      for (const auto& c : n.children) any = eval(c, power, tags) || any;
      return any;
    }
  }
  return false;
}

void run_timer(TimerState& t, bool enabled, int period_ms) {
  if (!enabled) {
    t.en = t.tt = t.dn = false;
    t.acc_ms = 0;
    return;
  }
  if (!t.en) {
    t.en = true;
    t.acc_ms = 0;
  } else if (!t.dn) {
    t.acc_ms += period_ms;
  }
  if (t.acc_ms >= t.preset_ms) {
    t.acc_ms = t.preset_ms;
    t.dn = true;
  }
  t.tt = t.en && !t.dn;
}

}  // namespace

std::string_view to_string(TagKind k) noexcept {
  switch (k) {
    case TagKind::LocalInput: return "local_input";
    case TagKind::HmiInput: return "hmi_input";
    case TagKind::Internal: return "internal";
    case TagKind::LocalOutput: return "local_output";
    case TagKind::RobotInput: return "robot_input";
    case TagKind::RobotOutput: return "robot_output";
  }
  return "internal";
}

std::optional<TagKind> parse_tag_kind(std::string_view s) noexcept {
  for (auto k : {TagKind::LocalInput, TagKind::HmiInput, TagKind::Internal, TagKind::LocalOutput,
                 TagKind::RobotInput, TagKind::RobotOutput})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

bool is_input(TagKind k) noexcept {
  return k == TagKind::LocalInput || k == TagKind::HmiInput || k == TagKind::RobotInput;
}

TagDatabase::TagDatabase(const LadderProgram& program) {
  for (const auto& t : program.tags) {
    bits_.emplace(t.name, false);
    defs_.emplace(t.name, t);
  }
  for (const auto& t : program.timers) timers_.emplace(t.name, TimerState{t.preset_ms, 0, false, false, false});
}

bool TagDatabase::has(std::string_view name) const noexcept {
  if (bits_.contains(name)) return true;
  const auto tb = split_timer_bit(name);
  return tb && timers_.contains(tb->timer);
}

bool TagDatabase::get(std::string_view name) const {
  if (const auto it = bits_.find(name); it != bits_.end()) return it->second;
  if (const auto tb = split_timer_bit(name)) {
    const TimerState& t = timer(tb->timer);
    if (tb->bit == "DN") return t.dn;
    if (tb->bit == "TT") return t.tt;
    return t.en;
  }
  throw Error("unknown tag '" + std::string(name) + "'");
}

void TagDatabase::set(std::string_view name, bool value) {
  const auto it = bits_.find(name);
  if (it == bits_.end()) throw Error("unknown tag '" + std::string(name) + "'");
  it->second = value;
}

const TimerState& TagDatabase::timer(std::string_view name) const {
  const auto it = timers_.find(name);
  if (it == timers_.end()) throw Error("unknown timer '" + std::string(name) + "'");
  return it->second;
}

TimerState& TagDatabase::timer(std::string_view name) {
  const auto it = timers_.find(name);
  if (it == timers_.end()) throw Error("unknown timer '" + std::string(name) + "'");
  return it->second;
}

const TagDef* TagDatabase::def(std::string_view name) const noexcept {
  const auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

const TagDef* TagDatabase::by_address(std::string_view address) const noexcept {
  for (const auto& [name, d] : defs_)
    if (d.address == address) return &d;
  return nullptr;
}

void validate(const LadderProgram& program) {
  std::map<std::string, TagKind, std::less<>> kinds;
  std::set<std::string, std::less<>> timers;
  for (const auto& t : program.tags) {
    if (t.name.empty()) throw FormatError("tag with empty name");
    if (!kinds.emplace(t.name, t.kind).second) throw FormatError("duplicate tag '" + t.name + "'");
    if (t.kind == TagKind::RobotInput && !find_alias(Direction::RobotToPlc, t.alias))
      throw FormatError("tag '" + t.name + "' maps to unknown robot input bit '" + t.alias + "'");
    if (t.kind == TagKind::RobotOutput && !find_alias(Direction::PlcToRobot, t.alias))
      throw FormatError("tag '" + t.name + "' maps to unknown robot output bit '" + t.alias + "'");
  }
  for (const auto& t : program.timers) {
    if (t.preset_ms <= 0) throw FormatError("timer '" + t.name + "' needs a positive preset");
    if (kinds.contains(t.name) || !timers.insert(t.name).second)
      throw FormatError("duplicate timer '" + t.name + "'");
  }

  auto check_read = [&](const std::string& tag, int rung) {
    if (kinds.contains(tag)) return;
    if (const auto tb = split_timer_bit(tag); tb && timers.contains(tb->timer)) return;
    throw FormatError("rung " + std::to_string(rung) + " references unknown tag '" + tag + "'");
  };
  auto walk = [&](auto&& self, const Network& n, int rung) -> void {
    switch (n.kind) {
      case Network::Kind::Xic:
      case Network::Kind::Xio:
        check_read(n.tag, rung);
        break;
      case Network::Kind::Ons: {
        const auto it = kinds.find(n.tag);
        if (it == kinds.end() || it->second != TagKind::Internal)
          throw FormatError("rung " + std::to_string(rung) + ": one-shot storage '" + n.tag +
                            "' must be an internal tag");
        break;
      }
      case Network::Kind::Series:
      case Network::Kind::Parallel:
        for (const auto& c : n.children) self(self, c, rung);
        break;
    }
  };

  std::map<std::string, int, std::less<>> ote_writer;
  std::map<std::string, int, std::less<>> latch_writer;
  std::map<std::string, int, std::less<>> timer_writer;
  for (const auto& r : program.rungs) {
    walk(walk, r.condition, r.number);
    for (const auto& o : r.outputs) {
      if (o.when) walk(walk, *o.when, r.number);
      const std::string where = "rung " + std::to_string(r.number);
      if (o.kind == Output::Kind::Ton) {
        if (!timers.contains(o.tag)) throw FormatError(where + ": TON on undeclared timer '" + o.tag + "'");
        if (!timer_writer.emplace(o.tag, r.number).second)
          throw FormatError(where + ": timer '" + o.tag + "' already driven");
        continue;
      }
      const auto it = kinds.find(o.tag);
      if (it == kinds.end()) throw FormatError(where + ": coil on unknown tag '" + o.tag + "'");
      if (is_input(it->second)) throw FormatError(where + ": coil writes input tag '" + o.tag + "'");
      if (o.kind == Output::Kind::Ote) {
        if (!ote_writer.emplace(o.tag, r.number).second || latch_writer.contains(o.tag))
          throw FormatError(where + ": coil '" + o.tag + "' is written by more than one output");
      } else {
        if (ote_writer.contains(o.tag))
          throw FormatError(where + ": '" + o.tag + "' mixes OTE with latch/unlatch");
        latch_writer.emplace(o.tag, r.number);
      }
    }
  }
}

void scan_once(const LadderProgram& program, TagDatabase& tags, int period_ms) {
  for (const auto& r : program.rungs) {
    const bool power = eval(r.condition, true, tags);
    for (const auto& o : r.outputs) {
      const bool p = o.when ? eval(*o.when, power, tags) : power;
      switch (o.kind) {
        case Output::Kind::Ote: tags.set(o.tag, p); break;
        case Output::Kind::Otl: if (p) tags.set(o.tag, true); break;
        case Output::Kind::Otu: if (p) tags.set(o.tag, false); break;
        case Output::Kind::Ton: run_timer(tags.timer(o.tag), p, period_ms); break;
      }
    }
  }
}

}  // namespace sortcell::plc
