#include "sortcell/io/snapshot.hpp"

#include "sortcell/iobus.hpp"

namespace sortcell::io {

using nlohmann::ordered_json;

namespace {

ordered_json pose(const Pose& p) { return {{"x", p.x}, {"y", p.y}, {"z", p.z}, {"rz", p.rz}}; }

ordered_json assembly(const TagAssembly& a) {
  ordered_json words = ordered_json::array();
  for (auto w : a.words()) words.push_back(w);
  return {{"words", words}, {"bits", a.decoded()}};
}

}  // namespace

ordered_json snapshot(const sim::Engine& e) {
  ordered_json s;
  s["schema_version"] = kSnapshotSchemaVersion;
  s["t_us"] = e.now_us();
  s["time_s"] = static_cast<double>(e.now_us()) / 1e6;

  const auto& c = e.conveyor();
  s["conveyor"] = {{"running", c.running},
                   {"speed_mm_per_s", c.speed_mm_per_s},
                   {"belt_length_mm", c.belt_length_mm},
                   {"beam_sensor_x_mm", c.beam_sensor_x_mm},
                   {"camera_window_x_mm", c.camera_window_x_mm},
                   {"beam_blocked", e.beam()}};

  const auto robot = e.robot();
  ordered_json parts = ordered_json::array();
  for (const auto& p : e.parts()) {
    ordered_json j = {{"id", p.id},
                      {"color", to_string(p.color_class)},
                      {"x_mm", p.x_mm},
                      {"y_mm", p.y_mm},
                      {"z_mm", p.z_mm},
                      {"rotation_deg", p.rotation_deg},
                      {"size_mm", p.size_mm},
                      {"state", to_string(p.state)}};
    parts.push_back(std::move(j));
  }
  s["parts"] = std::move(parts);

  const auto& bus = e.bus();
  s["assemblies"] = {{"robot_to_plc", assembly(bus.producer_view(Endpoint::Robot))},
                     {"plc_to_robot", assembly(bus.producer_view(Endpoint::Plc))},
                     {"plc_input_image", assembly(bus.consumer_image(Endpoint::Plc))},
                     {"robot_input_image", assembly(bus.consumer_image(Endpoint::Robot))}};

  ordered_json tags = ordered_json::object();
  for (const auto& [name, v] : e.plc_tags().bits()) tags[name] = v;
  ordered_json timers = ordered_json::object();
  for (const auto& [name, t] : e.plc_tags().timers())
    timers[name] = {{"preset_ms", t.preset_ms}, {"acc_ms", t.acc_ms}, {"en", t.en}, {"tt", t.tt}, {"dn", t.dn}};
  s["plc"] = {{"tags", std::move(tags)}, {"timers", std::move(timers)}};

  ordered_json dos = ordered_json::object();
  for (const auto& [i, v] : robot.do_table) dos[std::to_string(i)] = v;
  s["robot"] = {{"phase", sim::to_string(robot.phase)},
                {"permitted", robot.permitted},
                {"paused", robot.paused},
                {"program", robot.program},
                {"statement_index", robot.statement_index},
                {"statement", robot.statement},
                {"tool", pose(robot.tool)},
                {"held_part", robot.held_part ? ordered_json(*robot.held_part) : ordered_json(nullptr)},
                {"do", std::move(dos)},
                {"fault", robot.fault}};

  const auto& a = e.arduino();
  s["arduino"] = {{"input_a", to_string(a.input_a)},
                  {"input_b", to_string(a.input_b)},
                  {"commanded_angle_deg", a.commanded_angle_deg},
                  {"servo_angle_deg", e.servo_angle_now()},
                  {"led_rgb", {a.led_rgb.r, a.led_rgb.g, a.led_rgb.b}}};

  const auto& tagdb = e.plc_tags();
  auto bit = [&](const char* n) { return tagdb.has(n) && tagdb.get(n); };
  s["hmi"] = {{"enabled", bit("Enable")},
              {"selected", {{"r", bit("HMI_Red")}, {"g", bit("HMI_Green")}, {"b", bit("HMI_Blue")}}},
              {"override", bit("HMI_Override")}};

  s["bin"] = e.reject_bin().contents;
  s["metrics"] = sim::to_json(e.metrics());
  s["deadlock"] = e.deadlocked();
  s["finished"] = e.finished();
  return s;
}

}  // namespace sortcell::io
