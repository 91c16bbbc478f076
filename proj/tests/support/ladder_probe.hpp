#pragma once

#include "sortcell/plc/ladder.hpp"
#include "sortcell/plc/verdict.hpp"

namespace sortcell::testing {

struct LadderVerdict {
  bool part_match = false;
  bool remove = false;
  int scans_to_verdict = -1;
};

/// Drives the cell program through a scan-complete handshake with the given
/// color bits and reads the verdict coils once T1 is done.
inline LadderVerdict ladder_verdict(ColorFlags detected, ColorFlags selected, bool override_on,
                                    bool use_pushbuttons = false) {
  const auto& prog = plc::default_program();
  plc::TagDatabase tags(prog);
  tags.set(use_pushbuttons ? "Red_Sel_PB" : "HMI_Red", selected.red);
  tags.set(use_pushbuttons ? "Green_Sel_PB" : "HMI_Green", selected.green);
  tags.set(use_pushbuttons ? "Blue_Sel_PB" : "HMI_Blue", selected.blue);
  tags.set("HMI_Override", override_on);
  tags.set("Robot_Red", detected.red);
  tags.set("Robot_Green", detected.green);
  tags.set("Robot_Blue", detected.blue);
  tags.set("Robot_Scan_Done", true);
  LadderVerdict v;
  for (int i = 1; i <= 40; ++i) {
    plc::scan_once(prog, tags, 10);
    if (tags.get("Robot_Part_Match") || tags.get("Robot_Remove_Program")) {
      v.part_match = tags.get("Robot_Part_Match");
      v.remove = tags.get("Robot_Remove_Program");
      v.scans_to_verdict = i;
      break;
    }
  }
  return v;
}

inline ColorFlags flags_from_bits(int bits) { return {(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0}; }

/// Plain boolean statement of the rule, written independently of verdict().
inline bool brute_force_keep(ColorFlags d, ColorFlags s, bool override_on) {
  const bool green_counts = d.green && !(override_on && d.blue);
  return (d.red && s.red) || (green_counts && s.green) || (d.blue && s.blue);
}

}  // namespace sortcell::testing
