#include "sortcell/plc/verdict.hpp"

namespace sortcell::plc {

Verdict verdict(ColorFlags detected, const ColorFlags& selected, bool override_enabled) noexcept {
  if (override_enabled && detected.green && detected.blue) detected.green = false;
  const bool match = (detected.red && selected.red) || (detected.green && selected.green) ||
                     (detected.blue && selected.blue);
  return {match, !match};
}

}  // namespace sortcell::plc
