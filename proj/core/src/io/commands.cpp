#include "sortcell/io/commands.hpp"

#include <set>

#include "sortcell/errors.hpp"

namespace sortcell::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void only_keys(const json& m, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : m.items()) {
    bool ok = k == "command";
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw CommandError("invalid_argument", "unexpected field '" + k + "'");
  }
}

bool need_bool(const json& m, const char* key) {
  if (!m.contains(key)) throw CommandError("invalid_argument", std::string("missing field '") + key + "'");
  if (!m.at(key).is_boolean()) throw CommandError("invalid_argument", std::string("'") + key + "' must be a boolean");
  return m.at(key).get<bool>();
}

double opt_number(const json& m, const char* key, double fallback) {
  if (!m.contains(key)) return fallback;
  if (!m.at(key).is_number()) throw CommandError("invalid_argument", std::string("'") + key + "' must be a number");
  return m.at(key).get<double>();
}

}  // namespace

sim::Command parse_command(const json& m) {
  if (!m.is_object()) throw CommandError("malformed", "command must be a JSON object");
  if (!m.contains("command") || !m.at("command").is_string())
    throw CommandError("malformed", "missing string field 'command'");
  const auto name = m.at("command").get<std::string>();
  if (name == "start") {
    only_keys(m, {});
    return sim::StartCmd{};
  }
  if (name == "stop") {
    only_keys(m, {});
    return sim::StopCmd{};
  }
  if (name == "select_colors") {
    only_keys(m, {"r", "g", "b"});
    return sim::SelectColorsCmd{{need_bool(m, "r"), need_bool(m, "g"), need_bool(m, "b")}};
  }
  if (name == "set_override") {
    only_keys(m, {"enabled"});
    return sim::SetOverrideCmd{need_bool(m, "enabled")};
  }
  if (name == "spawn_part") {
    only_keys(m, {"color", "y_offset", "rz_deg"});
    if (!m.contains("color") || !m.at("color").is_string())
      throw CommandError("invalid_argument", "missing string field 'color'");
    const auto color = parse_color_class(m.at("color").get<std::string>());
    if (!color || *color == ColorClass::Unknown)
      throw CommandError("invalid_argument", "color must be one of red, green, blue");
    return sim::SpawnPartCmd{*color, opt_number(m, "y_offset", 0.0), opt_number(m, "rz_deg", 0.0)};
  }
  throw CommandError("unknown_command", "unknown command '" + name + "'");
}

sim::Command parse_command_text(const std::string& text) {
  json m;
  try {
    m = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CommandError("malformed", std::string("not valid JSON: ") + e.what());
  }
  return parse_command(m);
}

std::string command_name(const sim::Command& c) {
  static constexpr const char* names[] = {"start", "stop", "select_colors", "set_override", "spawn_part"};
  return names[c.index()];
}

ordered_json to_json(const sim::Command& c) {
  ordered_json j = {{"command", command_name(c)}};
  if (const auto* s = std::get_if<sim::SelectColorsCmd>(&c)) {
    j["r"] = s->colors.red;
    j["g"] = s->colors.green;
    j["b"] = s->colors.blue;
  } else if (const auto* o = std::get_if<sim::SetOverrideCmd>(&c)) {
    j["enabled"] = o->enabled;
  } else if (const auto* p = std::get_if<sim::SpawnPartCmd>(&c)) {
    j["color"] = to_string(p->color);
    j["y_offset"] = p->y_mm;
    j["rz_deg"] = p->rz_deg;
  }
  return j;
}

ordered_json error_json(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

ordered_json protocol_schema_json() {
  const ordered_json boolean = {{"type", "boolean"}};
  const ordered_json number = {{"type", "number"}};
  auto cmd = [](const char* name, ordered_json props, std::vector<std::string> required) {
    ordered_json p = {{"command", {{"const", name}}}};
    for (auto& [k, v] : props.items()) p[k] = v;
    required.insert(required.begin(), "command");
    return ordered_json{{"type", "object"},
                        {"properties", p},
                        {"required", required},
                        {"additionalProperties", false}};
  };
  ordered_json commands = ordered_json::array();
  commands.push_back(cmd("start", ordered_json::object(), {}));
  commands.push_back(cmd("stop", ordered_json::object(), {}));
  commands.push_back(cmd("select_colors", {{"r", boolean}, {"g", boolean}, {"b", boolean}}, {"r", "g", "b"}));
  commands.push_back(cmd("set_override", {{"enabled", boolean}}, {"enabled"}));
  commands.push_back(cmd("spawn_part",
                         {{"color", {{"enum", {"red", "green", "blue"}}}}, {"y_offset", number}, {"rz_deg", number}},
                         {"color"}));

  const ordered_json assembly = {
      {"type", "object"},
      {"properties", {{"words", {{"type", "array"}, {"items", {{"type", "integer"}}}, {"minItems", 4}, {"maxItems", 4}}},
                      {"bits", {{"type", "array"}, {"items", {{"type", "string"}}}}}}}};
  const ordered_json snapshot = {
      {"type", "object"},
      {"required",
       {"schema_version", "t_us", "time_s", "conveyor", "parts", "assemblies", "plc", "robot", "arduino", "hmi", "bin",
        "metrics", "deadlock", "finished"}},
      {"properties",
       {{"schema_version", {{"const", 1}}},
        {"t_us", {{"type", "integer"}}},
        {"time_s", number},
        {"conveyor", {{"type", "object"}}},
        {"parts",
         {{"type", "array"},
          {"items",
           {{"type", "object"},
            {"required", {"id", "color", "x_mm", "y_mm", "z_mm", "rotation_deg", "size_mm", "state"}}}}}},
        {"assemblies",
         {{"type", "object"},
          {"properties",
           {{"robot_to_plc", assembly},
            {"plc_to_robot", assembly},
            {"plc_input_image", assembly},
            {"robot_input_image", assembly}}}}},
        {"plc", {{"type", "object"}}},
        {"robot",
         {{"type", "object"},
          {"required", {"phase", "program", "statement_index", "statement", "tool", "held_part", "do"}}}},
        {"arduino", {{"type", "object"}}},
        {"hmi", {{"type", "object"}}},
        {"bin", {{"type", "array"}, {"items", {{"type", "integer"}}}}},
        {"metrics", {{"type", "object"}}},
        {"deadlock", boolean},
        {"finished", boolean}}}};
  const ordered_json error = {
      {"type", "object"},
      {"properties",
       {{"error",
         {{"type", "object"},
          {"properties",
           {{"code", {{"enum", {"malformed", "unknown_command", "invalid_argument"}}}},
            {"message", {{"type", "string"}}}}}}}}}};
  return {{"protocol_version", kProtocolVersion},
          {"endpoints",
           {{"GET /api/snapshot", "Snapshot"},
            {"POST /api/command", "Command -> 202 {accepted} | 400 Error"},
            {"GET /api/stream", "text/event-stream: 'snapshot' event, then 'patch' events (RFC 6902)"},
            {"GET /api/schema", "this document"}}},
          {"Command", {{"oneOf", commands}}},
          {"Snapshot", snapshot},
          {"Error", error}};
}

}  // namespace sortcell::io
