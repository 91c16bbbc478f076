#pragma once

#include <nlohmann/json.hpp>

#include "sortcell/sim/engine.hpp"

namespace sortcell::io {

inline constexpr int kSnapshotSchemaVersion = 1;

/// Full observable state of the cell as one immutable JSON document.
nlohmann::ordered_json snapshot(const sim::Engine& engine);

}  // namespace sortcell::io
