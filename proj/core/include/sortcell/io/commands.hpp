#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "sortcell/sim/command.hpp"

namespace sortcell::io {

inline constexpr int kProtocolVersion = 1;

/// Decodes one operator command message. Throws CommandError with code
/// "malformed", "unknown_command" or "invalid_argument".
sim::Command parse_command(const nlohmann::json& message);
sim::Command parse_command_text(const std::string& text);

nlohmann::ordered_json to_json(const sim::Command& c);
std::string command_name(const sim::Command& c);

nlohmann::ordered_json error_json(const std::string& code, const std::string& message);

/// Machine-readable description of every service message.
nlohmann::ordered_json protocol_schema_json();

}  // namespace sortcell::io
