#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sortcell/sim/scenario.hpp"

namespace sortcell::io {

/// Canonical form: every field written, fixed key order.
nlohmann::ordered_json to_json(const sim::Scenario& s);
/// Missing fields take defaults; unknown keys and wrong types throw
/// FormatError. Range checks are left to sim::validate.
sim::Scenario scenario_from_json(const nlohmann::json& j);
sim::Scenario parse_scenario(std::string_view text);
std::string dump_scenario(const sim::Scenario& s);

/// SHA-256 (hex) of the canonical form without the seed.
std::string scenario_hash(const sim::Scenario& s);

std::string sha256_hex(std::string_view data);

}  // namespace sortcell::io
