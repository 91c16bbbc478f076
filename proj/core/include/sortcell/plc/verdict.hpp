#pragma once

#include "sortcell/workcell.hpp"

namespace sortcell::plc {

struct Verdict {
  bool part_match = false;
  bool remove = false;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Keep/remove decision. With the override on, a part that lit both the
/// green and blue scans counts as blue only.
Verdict verdict(ColorFlags detected, const ColorFlags& selected, bool override_enabled) noexcept;

}  // namespace sortcell::plc
