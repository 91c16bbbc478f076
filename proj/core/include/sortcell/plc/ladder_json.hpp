#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

#include "sortcell/plc/ladder.hpp"

namespace sortcell::plc {

// Document shape:
//   {"name", "tags": [{name, address, kind, alias?}], "timers": [{name, preset_ms}],
//    "rungs": [{number, comment, condition: NET, outputs: [{ote|otl|otu|ton: tag, when?: NET}]}]}
// NET is {"xic": tag} | {"xio": tag} | {"ons": tag} | {"parallel": [NET...]} |
// {"series": [NET...]} | [NET...] (series shorthand).

nlohmann::json network_to_json(const Network& n);
Network network_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LadderProgram& program);
/// Throws FormatError on shape errors. Does not run validate().
LadderProgram ladder_from_json(const nlohmann::json& j);
/// Parses and validates.
LadderProgram load_ladder(std::string_view text);

}  // namespace sortcell::plc
