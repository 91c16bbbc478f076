#pragma once

#include <cstdint>
#include <variant>

#include "sortcell/workcell.hpp"

namespace sortcell::sim {

// Operator commands. Each maps onto HMI tags or the part feeder.
struct StartCmd {
  friend bool operator==(const StartCmd&, const StartCmd&) = default;
};
struct StopCmd {
  friend bool operator==(const StopCmd&, const StopCmd&) = default;
};
struct SelectColorsCmd {
  ColorFlags colors;
  friend bool operator==(const SelectColorsCmd&, const SelectColorsCmd&) = default;
};
struct SetOverrideCmd {
  bool enabled = false;
  friend bool operator==(const SetOverrideCmd&, const SetOverrideCmd&) = default;
};
struct SpawnPartCmd {
  ColorClass color = ColorClass::Red;
  double y_mm = 0.0;
  double rz_deg = 0.0;
  friend bool operator==(const SpawnPartCmd&, const SpawnPartCmd&) = default;
};

using Command = std::variant<StartCmd, StopCmd, SelectColorsCmd, SetOverrideCmd, SpawnPartCmd>;

/// HMI start/stop are momentary: held for this long, then released.
inline constexpr std::int64_t kHmiPulseUs = 100'000;

}  // namespace sortcell::sim
