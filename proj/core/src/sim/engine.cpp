#include "sortcell/sim/engine.hpp"

#include <algorithm>
#include <cmath>

#include "cell.hpp"
#include "sortcell/errors.hpp"

namespace sortcell::sim {

using nlohmann::ordered_json;

std::string_view to_string(Source s) noexcept {
  switch (s) {
    case Source::Bus: return "bus";
    case Source::Plc: return "plc";
    case Source::Robot: return "robot";
    case Source::Arduino: return "arduino";
    case Source::Workcell: return "workcell";
    case Source::Operator: return "operator";
  }
  return "?";
}

std::string_view to_string(RobotPhase p) noexcept {
  switch (p) {
    case RobotPhase::Idle: return "Idle";
    case RobotPhase::Scanning: return "Scanning";
    case RobotPhase::AwaitVerdict: return "AwaitVerdict";
    case RobotPhase::Sorting: return "Sorting";
    case RobotPhase::Faulted: return "Faulted";
  }
  return "?";
}

ordered_json to_json(const Metrics& m) {
  ordered_json colors = ordered_json::object();
  for (const auto& [name, c] : m.by_color) colors[name] = {{"kept", c.kept}, {"removed", c.removed}};
  return {{"sim_time_s", static_cast<double>(m.sim_time_us) / 1e6},
          {"parts_spawned", m.parts_spawned},
          {"parts_kept", m.parts_kept},
          {"parts_removed", m.parts_removed},
          {"parts_on_belt", m.parts_on_belt},
          {"by_color", colors},
          {"misclassified", m.misclassified},
          {"verdicts", m.verdicts},
          {"runtime_faults", m.runtime_faults},
          {"mean_cycle_time_s", m.mean_cycle_time_s},
          {"min_verdict_latency_s", m.min_verdict_latency_s},
          {"reject_bin", m.reject_bin}};
}

namespace detail {

namespace {

int priority(Action a) {
  switch (a) {
    case Action::BusTick: return 0;
    case Action::PlcScan: return 1;
    case Action::RobotPoll:
    case Action::RobotWake: return 2;
    case Action::ServoSettle: return 3;
    case Action::PhysicsTick: return 4;
  }
  return 5;
}

ordered_json words_json(const Words& w) { return ordered_json(std::vector<int>(w.begin(), w.end())); }

bool terminal(PartState s) { return s == PartState::InRejectBin || s == PartState::PassedThrough; }

}  // namespace

ordered_json pose_json(const Pose& p) { return {{"x", p.x}, {"y", p.y}, {"z", p.z}, {"rz", p.rz}}; }

Cell::Cell(Scenario s)
    : scenario(std::move(s)),
      ladder(plc::default_program()),
      conveyor(scenario.params.conveyor),
      arduino(scenario.params.arduino),
      bus(scenario.params.bus) {
  validate(scenario);
  for (auto& t : ladder.timers)
    if (t.name == "T1") t.preset_ms = scenario.params.plc.t1_preset_ms;
  tags = plc::TagDatabase(ladder);
  conveyor.running = false;
  end_us = tp::seconds_to_us(scenario.duration_s);
  bus.register_endpoint(Endpoint::Plc);
  bus.register_endpoint(Endpoint::Robot);

  for (const auto& p : spawn_schedule(scenario)) pending_spawns.push_back(p);
  scheduled_total = static_cast<int>(pending_spawns.size());

  for (const auto& t : ladder.tags)
    if ((t.kind == plc::TagKind::LocalInput || t.kind == plc::TagKind::HmiInput) && t.name != "Beam")
      operator_inputs.emplace(t.name, false);

  // Panel state at power-up, then the scenario's own script.
  script = {{0.0, "HMI_Red", scenario.selected.red},
            {0.0, "HMI_Green", scenario.selected.green},
            {0.0, "HMI_Blue", scenario.selected.blue},
            {0.0, "HMI_Override", scenario.override_enabled}};
  if (scenario.auto_start) {
    script.push_back({0.0, "HMI_Start", true});
    script.push_back({static_cast<double>(kHmiPulseUs) / 1e6, "HMI_Start", false});
  }
  script.insert(script.end(), scenario.script.begin(), scenario.script.end());
  std::stable_sort(script.begin(), script.end(),
                   [](const OperatorAction& a, const OperatorAction& b) { return a.t_s < b.t_s; });

  robot = std::make_unique<RobotNode>(*this);

  schedule(0, Action::BusTick);
  schedule(0, Action::PlcScan);
  schedule(0, Action::RobotPoll);
  schedule(0, Action::PhysicsTick);
}

void Cell::schedule(std::int64_t t_us, Action a, std::uint64_t token) {
  queue.insert(Scheduled{t_us, priority(a), sched_seq++, a, token});
}

void Cell::log(Source src, const char* k, ordered_json data) {
  trace.push_back(TraceEvent{trace.size() + 1, now, std::string(to_string(src)), k, std::move(data)});
  last_event_us = now;
}

void Cell::sync_arduino() {
  if (now > arduino_synced_us) arduino.advance(static_cast<double>(now - arduino_synced_us) / 1e6);
  arduino_synced_us = now;
}

void Cell::drive_arduino(LineLevel a, LineLevel b) {
  sync_arduino();
  if (!arduino.set_inputs(a, b)) return;
  const auto& st = arduino.state();
  log(Source::Arduino, kind::TagChange,
      {{"input_a", std::string(to_string(st.input_a))},
       {"input_b", std::string(to_string(st.input_b))},
       {"angle_deg", st.commanded_angle_deg},
       {"led", {st.led_rgb.r, st.led_rgb.g, st.led_rgb.b}}});
  const double dt = time_to_settle(st, arduino.config());
  schedule(now + static_cast<std::int64_t>(std::ceil(dt * 1e6)), Action::ServoSettle, ++settle_token);
}

void Cell::update_beam() {
  const bool b = beam_blocked(conveyor, parts);
  if (b == beam) return;
  beam = b;
  const auto id = part_at_beam(conveyor, parts);
  log(Source::Workcell, kind::BeamEdge, {{"blocked", b}, {"part", id ? ordered_json(*id) : ordered_json(nullptr)}});
  if (b && id && !scan_part) {
    scan_part = *id;
    records[*id].beam_us = now;
  }
}

std::optional<std::size_t> Cell::find_part(int id) const {
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (parts[i].id == id) return i;
  return std::nullopt;
}

void Cell::set_part_state(std::size_t index, PartState s) {
  auto& p = parts[index];
  p.state = s;
  records[p.id].state = s;
  log(Source::Workcell, kind::PartState,
      {{"part", p.id}, {"state", std::string(to_string(s))}, {"x", p.x_mm}, {"y", p.y_mm}, {"z", p.z_mm}});
}

void Cell::dispatch(const Scheduled& e) {
  switch (e.action) {
    case Action::BusTick:
      bus_tick();
      schedule(now + scenario.params.bus.rpi_us, Action::BusTick);
      break;
    case Action::PlcScan:
      plc_scan();
      schedule(now + scenario.params.plc.scan_ms * std::int64_t{1000}, Action::PlcScan);
      break;
    case Action::RobotPoll:
      robot->poll();
      schedule(now + scenario.params.bus.rpi_us, Action::RobotPoll);
      break;
    case Action::RobotWake:
      robot->wake(e.token);
      break;
    case Action::ServoSettle:
      if (e.token == settle_token) {
        sync_arduino();
        const auto& st = arduino.state();
        const auto f = filter_at_angle(st.commanded_angle_deg);
        log(Source::Arduino, kind::ServoSettled,
            {{"angle_deg", st.servo_actual_angle_deg},
             {"filter", std::string(to_string(f ? *f : FilterName::NoFilter))}});
      }
      break;
    case Action::PhysicsTick:
      physics_tick();
      schedule(now + scenario.params.sim.physics_tick_us, Action::PhysicsTick);
      break;
  }
}

void Cell::bus_tick() {
  for (const auto& d : bus.exchange()) {
    log(Source::Bus, kind::TagChange,
        {{"assembly", std::string(to_string(d.direction))},
         {"consumer", d.direction == Direction::RobotToPlc ? "plc" : "robot"},
         {"words", words_json(d.after)},
         {"bits", unpack(d.direction, d.after)}});
  }
}

void Cell::apply_command(const Command& c) {
  auto pulse = [&](const char* tag) {
    operator_inputs[tag] = true;
    releases.emplace_back(now + kHmiPulseUs, tag);
  };
  std::visit(
      [&](const auto& cmd) {
        using T = std::decay_t<decltype(cmd)>;
        if constexpr (std::is_same_v<T, StartCmd>) {
          pulse("HMI_Start");
          log(Source::Operator, kind::Command, {{"command", "start"}});
        } else if constexpr (std::is_same_v<T, StopCmd>) {
          pulse("HMI_Stop");
          log(Source::Operator, kind::Command, {{"command", "stop"}});
        } else if constexpr (std::is_same_v<T, SelectColorsCmd>) {
          operator_inputs["HMI_Red"] = cmd.colors.red;
          operator_inputs["HMI_Green"] = cmd.colors.green;
          operator_inputs["HMI_Blue"] = cmd.colors.blue;
          log(Source::Operator, kind::Command,
              {{"command", "select_colors"}, {"r", cmd.colors.red}, {"g", cmd.colors.green}, {"b", cmd.colors.blue}});
        } else if constexpr (std::is_same_v<T, SetOverrideCmd>) {
          operator_inputs["HMI_Override"] = cmd.enabled;
          log(Source::Operator, kind::Command, {{"command", "set_override"}, {"enabled", cmd.enabled}});
        } else {
          const PartSpec spec{static_cast<double>(now) / 1e6, cmd.color, cmd.y_mm, cmd.rz_deg};
          auto pos = std::upper_bound(pending_spawns.begin(), pending_spawns.end(), spec,
                                      [](const PartSpec& a, const PartSpec& b) { return a.t_s < b.t_s; });
          pending_spawns.insert(pos, spec);
          ++scheduled_total;
          log(Source::Operator, kind::Command,
              {{"command", "spawn_part"}, {"color", std::string(to_string(cmd.color))}, {"y_offset", cmd.y_mm}});
        }
      },
      c);
}

void Cell::plc_scan() {
  while (script_pos < script.size() && tp::seconds_to_us(script[script_pos].t_s) <= now) {
    operator_inputs[script[script_pos].tag] = script[script_pos].value;
    ++script_pos;
  }
  std::erase_if(releases, [&](const auto& r) {
    if (r.first > now) return false;
    operator_inputs[r.second] = false;
    return true;
  });
  while (!commands.empty()) {
    apply_command(commands.front());
    commands.pop_front();
  }

  const plc::TagDatabase before = tags;
  for (const auto& [name, v] : operator_inputs) tags.set(name, v);
  tags.set("Beam", beam);
  const auto& image = bus.consumer_image(Endpoint::Plc);
  for (const auto& t : ladder.tags)
    if (t.kind == plc::TagKind::RobotInput) tags.set(t.name, image.get(t.alias));

  plc::scan_once(ladder, tags, scenario.params.plc.scan_ms);

  for (const auto& [name, v] : tags.bits())
    if (before.get(name) != v) log(Source::Plc, kind::TagChange, {{"tag", name}, {"value", v}});
  for (const auto& [name, t] : tags.timers())
    if (before.timer(name).dn != t.dn) log(Source::Plc, kind::TagChange, {{"tag", name + ".DN"}, {"value", t.dn}});

  conveyor.running = tags.get("ConveyorRun");
  auto& out = bus.producer(Endpoint::Plc);
  for (const auto& t : ladder.tags)
    if (t.kind == plc::TagKind::RobotOutput) out.set(t.alias, tags.get(t.name));

  const bool verdict_rose = (tags.get("Robot_Part_Match") && !before.get("Robot_Part_Match")) ||
                            (tags.get("Robot_Remove_Program") && !before.get("Robot_Remove_Program"));
  if (verdict_rose) {
    const ColorFlags detected{tags.get("Robot_Red"), tags.get("Robot_Green"), tags.get("Robot_Blue")};
    const ColorFlags selected{tags.get("Red_Sel_PB") || tags.get("HMI_Red"),
                              tags.get("Green_Sel_PB") || tags.get("HMI_Green"),
                              tags.get("Blue_Sel_PB") || tags.get("HMI_Blue")};
    const bool keep = tags.get("Robot_Part_Match");
    ordered_json data = {{"part", scan_part ? ordered_json(*scan_part) : ordered_json(nullptr)},
                         {"detected", {{"red", detected.red}, {"green", detected.green}, {"blue", detected.blue}}},
                         {"selected", {{"red", selected.red}, {"green", selected.green}, {"blue", selected.blue}}},
                         {"override", tags.get("HMI_Override")},
                         {"verdict", keep ? "keep" : "remove"}};
    if (scan_part) {
      auto& rec = records[*scan_part];
      rec.verdict_us = now;
      rec.keep = keep;
      rec.detected = detected;
      rec.expected_keep = selected.has(rec.color);
      if (rec.beam_us) data["latency_s"] = static_cast<double>(now - *rec.beam_us) / 1e6;
    }
    log(Source::Plc, kind::VerdictIssued, std::move(data));
  }
  if (!tags.get("PartPresent") && before.get("PartPresent")) scan_part.reset();
}

void Cell::try_spawn() {
  const auto& p = scenario.params;
  while (!pending_spawns.empty() && tp::seconds_to_us(pending_spawns.front().t_s) <= now) {
    if (last_spawned) {
      const auto& prev = parts[*last_spawned];
      if (prev.state == PartState::OnBelt && prev.x_mm - p.part_size_mm / 2.0 < min_part_spacing_mm(p) - 1e-6) return;
    }
    const PartSpec spec = pending_spawns.front();
    pending_spawns.pop_front();
    Part part;
    part.id = next_part_id++;
    part.color_class = spec.color;
    part.reflectance = p.optics.palette.for_color(spec.color);
    part.size_mm = p.part_size_mm;
    part.x_mm = p.part_size_mm / 2.0;
    part.y_mm = spec.y_mm;
    part.rotation_deg = spec.rz_deg;
    parts.push_back(part);
    last_spawned = parts.size() - 1;
    PartRecord rec;
    rec.id = part.id;
    rec.color = spec.color;
    rec.y_mm = spec.y_mm;
    rec.spawn_us = now;
    records[part.id] = rec;
    log(Source::Workcell, kind::PartSpawn,
        {{"part", part.id},
         {"color", std::string(to_string(spec.color))},
         {"x", part.x_mm},
         {"y", part.y_mm},
         {"rz", part.rotation_deg}});
  }
}

void Cell::physics_tick() {
  if (belt_moving) {
    std::vector<PartState> before;
    before.reserve(parts.size());
    for (const auto& p : parts) before.push_back(p.state);
    ConveyorState moving = conveyor;
    moving.running = true;
    advance_conveyor(moving, parts, static_cast<double>(scenario.params.sim.physics_tick_us) / 1e6);
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (parts[i].state != before[i]) {
        const PartState s = parts[i].state;
        parts[i].state = before[i];
        set_part_state(i, s);
      }
  }
  if (belt_moving != conveyor.running) {
    belt_moving = conveyor.running;
    log(Source::Workcell, kind::TagChange, {{"conveyor", belt_moving ? "running" : "stopped"}});
  }
  try_spawn();
  update_beam();
  check_progress();
}

void Cell::check_progress() {
  bool any_on_belt = false;
  bool all_terminal = true;
  for (const auto& p : parts) {
    any_on_belt = any_on_belt || p.state == PartState::OnBelt;
    all_terminal = all_terminal && terminal(p.state);
  }
  if (scheduled_total > 0 && pending_spawns.empty() && all_terminal && !tags.get("PartPresent") &&
      robot->phase() == RobotPhase::Idle)
    budget_done = true;
  if (tags.get("Enable") && !conveyor.running && any_on_belt &&
      now - last_event_us >= tp::seconds_to_us(scenario.params.sim.deadlock_timeout_s))
    deadlock = true;
}

}  // namespace detail

Engine::Engine(Scenario scenario) : cell_(std::make_unique<detail::Cell>(std::move(scenario))) {}
Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

void Engine::step(std::int64_t until_us) {
  auto& c = *cell_;
  while (!c.queue.empty() && c.queue.begin()->t_us <= until_us) {
    const detail::Scheduled e = *c.queue.begin();
    c.queue.erase(c.queue.begin());
    c.now = e.t_us;
    c.dispatch(e);
  }
  c.now = std::max(c.now, until_us);
}

void Engine::run() {
  auto& c = *cell_;
  while (!c.queue.empty() && c.queue.begin()->t_us <= c.end_us && !c.budget_done) {
    const detail::Scheduled e = *c.queue.begin();
    c.queue.erase(c.queue.begin());
    c.now = e.t_us;
    c.dispatch(e);
    if (c.deadlock) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "no progress for %.1f s at t=%.3f s with the conveyor stopped and parts on the belt",
                    c.scenario.params.sim.deadlock_timeout_s, static_cast<double>(c.now) / 1e6);
      throw DeadlockDetected(buf);
    }
  }
  if (!c.budget_done) c.now = std::max(c.now, c.end_us);
}

void check_command(const Command& cmd, const ScenarioParams& p) {
  if (const auto* s = std::get_if<SpawnPartCmd>(&cmd)) {
    if (s->color == ColorClass::Unknown) throw CommandError("invalid_argument", "spawn_part.color must be red, green or blue");
    if (!std::isfinite(s->y_mm) || std::abs(s->y_mm) + p.part_size_mm * std::sqrt(0.5) > p.conveyor.belt_half_width_mm)
      throw CommandError("invalid_argument", "spawn_part.y_offset puts the part over the belt edge");
    if (!std::isfinite(s->rz_deg)) throw CommandError("invalid_argument", "spawn_part.rz must be finite");
  }
}

void Engine::submit(const Command& cmd) {
  check_command(cmd, cell_->scenario.params);
  cell_->commands.push_back(cmd);
}

std::int64_t Engine::now_us() const noexcept { return cell_->now; }
bool Engine::finished() const noexcept { return cell_->budget_done || cell_->now >= cell_->end_us; }
bool Engine::deadlocked() const noexcept { return cell_->deadlock; }
const Scenario& Engine::scenario() const noexcept { return cell_->scenario; }
const std::vector<TraceEvent>& Engine::trace() const noexcept { return cell_->trace; }
const std::map<int, PartRecord>& Engine::part_records() const noexcept { return cell_->records; }
const std::vector<Part>& Engine::parts() const noexcept { return cell_->parts; }
const ConveyorState& Engine::conveyor() const noexcept { return cell_->conveyor; }
const RejectBin& Engine::reject_bin() const noexcept { return cell_->bin; }
const IoBus& Engine::bus() const noexcept { return cell_->bus; }
const plc::TagDatabase& Engine::plc_tags() const noexcept { return cell_->tags; }
const ArduinoState& Engine::arduino() const noexcept { return cell_->arduino.state(); }
RobotView Engine::robot() const { return cell_->robot->view(); }
bool Engine::beam() const noexcept { return cell_->beam; }

double Engine::servo_angle_now() const noexcept {
  const auto& c = *cell_;
  const double dt = static_cast<double>(c.now - c.arduino_synced_us) / 1e6;
  return step_servo(c.arduino.state(), dt, c.arduino.config()).servo_actual_angle_deg;
}

Metrics Engine::metrics() const {
  const auto& c = *cell_;
  Metrics m;
  m.sim_time_us = c.now;
  m.runtime_faults = c.runtime_faults;
  m.reject_bin = c.bin.contents;
  for (const char* name : {"red", "green", "blue"}) m.by_color[name] = {};
  double cycle_sum = 0.0;
  int cycles = 0;
  std::optional<double> min_latency;
  for (const auto& [id, r] : c.records) {
    ++m.parts_spawned;
    auto& cc = m.by_color[std::string(to_string(r.color))];
    switch (r.state) {
      case PartState::PassedThrough: ++m.parts_kept; ++cc.kept; break;
      case PartState::InRejectBin: ++m.parts_removed; ++cc.removed; break;
      default: ++m.parts_on_belt; break;
    }
    if (r.keep) {
      ++m.verdicts;
      if (r.expected_keep && *r.keep != *r.expected_keep) ++m.misclassified;
    }
    if (r.beam_us && r.verdict_us) {
      const double lat = static_cast<double>(*r.verdict_us - *r.beam_us) / 1e6;
      min_latency = min_latency ? std::min(*min_latency, lat) : lat;
    }
    if (r.beam_us && r.sorted_us) {
      cycle_sum += static_cast<double>(*r.sorted_us - *r.beam_us) / 1e6;
      ++cycles;
    }
  }
  m.mean_cycle_time_s = cycles ? cycle_sum / cycles : 0.0;
  m.min_verdict_latency_s = min_latency.value_or(0.0);
  return m;
}

}  // namespace sortcell::sim
