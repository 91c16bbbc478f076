#include <algorithm>
#include <cmath>

#include "cell.hpp"
#include "sortcell/errors.hpp"
#include "sortcell/tp/corpus.hpp"

namespace sortcell::sim::detail {

using nlohmann::ordered_json;

namespace {

constexpr int kResetOnFault[] = {110, 112, 123, 124, 125, 126, 130};

std::string_view motion_name(tp::MotionKind k) { return k == tp::MotionKind::Joint ? "joint" : "linear"; }

}  // namespace

RobotNode::RobotNode(Cell& cell) : cell_(cell) {
  const auto& p = cell.scenario.params;
  regs_ = tp::default_registers(p.conveyor.camera_window_x_mm, p.part_size_mm);
  tool_ = regs_.p.at(1) + regs_.pr.at(81);
  for (const char* name : {"REDSCAN", "GRNSCAN", "BLUSCAN"}) {
    VisionProcess vp;
    vp.name = name;
    vp.find_threshold_delta = p.vision.find_threshold_delta;
    vp.min_area_px = p.vision.min_area_px;
    vp.max_area_px = p.vision.max_area_px;
    vp.segmentation_delta = p.vision.segmentation_delta;
    processes_.emplace(name, vp);
  }
  if (p.robot.initial_fault) {
    phase_ = RobotPhase::Faulted;
    fault_text_ = "controller fault present at power-up";
  }
}

bool RobotNode::image_bit(std::string_view alias) const {
  return cell_.bus.consumer_image(Endpoint::Robot).get(alias);
}

void RobotNode::poll() {
  permitted_ = image_bit("Enable") && image_bit("IMSTP") && image_bit("SFSPD") && image_bit("Stop") &&
               !image_bit("HOLD");

  const bool reset = image_bit("Fault Reset");
  if (reset && !fault_reset_seen_ && phase_ == RobotPhase::Faulted) clear_fault();
  fault_reset_seen_ = reset;

  const bool running = phase_ == RobotPhase::Scanning || phase_ == RobotPhase::Sorting;
  if (running && !permitted_ && !paused_) {
    paused_ = true;
    paused_remaining_us_ = std::max<std::int64_t>(0, wake_at_us_ - cell_.now);
    ++wake_token_;
    if (motion_) {
      motion_->from = tool_now();
      motion_->start_us = motion_->end_us = cell_.now;
    }
    cell_.log(Source::Robot, kind::ProgramPaused,
              {{"program", interp_->program().name}, {"remaining_us", paused_remaining_us_}});
  } else if (running && permitted_ && paused_) {
    paused_ = false;
    wake_at_us_ = cell_.now + paused_remaining_us_;
    if (motion_) {
      motion_->start_us = cell_.now;
      motion_->end_us = wake_at_us_;
    }
    cell_.schedule(wake_at_us_, Action::RobotWake, ++wake_token_);
    cell_.log(Source::Robot, kind::ProgramResumed, {{"program", interp_->program().name}});
  }

  if (permitted_ && !paused_) {
    if (phase_ == RobotPhase::Idle && image_bit("Scan Program")) {
      start_program(tp::scanpart(), RobotPhase::Scanning);
    } else if (phase_ == RobotPhase::AwaitVerdict && (image_bit("Part match") || image_bit("Remove Program"))) {
      start_program(tp::sortpart(), RobotPhase::Sorting);
    }
  }
  publish_status();
}

void RobotNode::wake(std::uint64_t token) {
  if (token != wake_token_ || paused_ || !interp_) return;
  finish_motion();
  run_interpreter();
  publish_status();
}

void RobotNode::start_program(const tp::TpProgram& program, RobotPhase phase) {
  phase_ = phase;
  interp_ = std::make_unique<tp::Interpreter>(program, regs_, cell_.scenario.params.robot.timing);
  cell_.log(Source::Robot, kind::ProgramStart, {{"program", program.name}});
  run_interpreter();
}

void RobotNode::run_interpreter() {
  tp::StepResult r;
  try {
    r = interp_->resume(*this);
  } catch (const RuntimeFault& f) {
    fault(f.statement(), f.cause());
    return;
  }
  if (r.kind == tp::StepResult::Kind::Blocked) {
    wake_at_us_ = cell_.now + r.wait_us;
    cell_.schedule(wake_at_us_, Action::RobotWake, ++wake_token_);
    return;
  }
  const std::string name = interp_->program().name;
  cell_.log(Source::Robot, kind::ProgramEnd, {{"program", name}});
  interp_.reset();
  if (phase_ == RobotPhase::Scanning) {
    phase_ = RobotPhase::AwaitVerdict;
  } else {
    phase_ = RobotPhase::Idle;
    if (cell_.scan_part) cell_.records[*cell_.scan_part].sorted_us = cell_.now;
  }
}

void RobotNode::finish_motion() {
  if (!motion_) return;
  tool_ = motion_->to;
  motion_.reset();
  if (held_) {
    auto& part = cell_.parts[*held_];
    part.x_mm = tool_.x;
    part.y_mm = tool_.y;
    part.z_mm = tool_.z - part.size_mm;
  }
  cell_.log(Source::Robot, kind::MotionEnd, {{"pose", pose_json(tool_)}});
}

void RobotNode::fault(const std::string& statement, const std::string& cause) {
  const std::string program = interp_ ? interp_->program().name : std::string();
  phase_ = RobotPhase::Faulted;
  fault_text_ = cause;
  interp_.reset();
  motion_.reset();
  paused_ = false;
  ++wake_token_;
  ++cell_.runtime_faults;
  cell_.log(Source::Robot, kind::RobotFault, {{"program", program}, {"statement", statement}, {"cause", cause}});
  publish_status();
}

void RobotNode::clear_fault() {
  phase_ = RobotPhase::Idle;
  fault_text_.clear();
  cell_.log(Source::Robot, kind::RobotFault, {{"cleared", true}});
  for (int d : kResetOnFault) set_do(d, "", false);
  if (held_) set_do(111, "SUCTION CUP", false);
}

void RobotNode::publish_status() {
  auto& out = cell_.bus.producer(Endpoint::Robot);
  const bool running = phase_ == RobotPhase::Scanning || phase_ == RobotPhase::Sorting;
  const bool faulted = phase_ == RobotPhase::Faulted;
  const Pose& perch = regs_.p.at(1);
  const bool over_bin = !motion_ && std::hypot(tool_.x - perch.x, tool_.y - perch.y) < 1.0;
  out.set("Cmd enabled", permitted_);
  out.set("System ready", permitted_ && !faulted);
  out.set("Prg running", permitted_ && running && !paused_);
  out.set("Prg paused", !permitted_ || paused_);
  out.set("Motion held", !permitted_);
  out.set("Fault", faulted);
  out.set("At perch", permitted_ && phase_ == RobotPhase::Idle && over_bin);
  out.set("TP enabled", false);
}

void RobotNode::set_do(int index, std::string_view label, bool value) {
  const bool before = io_.get_do(index);
  io_.do_table[index] = value;
  const auto* coupling = default_wiring().for_do(index);
  if (before != value) {
    cell_.log(Source::Robot, kind::TagChange,
              {{"io", "DO"},
               {"index", index},
               {"label", std::string(coupling ? coupling->label : label)},
               {"value", value}});
  }
  if (!coupling) return;
  switch (coupling->sink) {
    case DoSink::Assembly:
      cell_.bus.producer(Endpoint::Robot).set_bit(coupling->address, value);
      break;
    case DoSink::ArduinoInputA:
    case DoSink::ArduinoInputB:
      cell_.drive_arduino(relay_line(io_.get_do(110)), relay_line(io_.get_do(112)));
      break;
    case DoSink::Suction:
      if (before != value) suction(value);
      break;
  }
}

bool RobotNode::get_di(int index) const {
  const auto& w = default_wiring();
  if (index == w.remove_part_di) return image_bit(w.remove_part_source);
  return false;
}

VisionRegister RobotNode::run_find(std::string_view process) {
  const auto it = processes_.find(process);
  if (it == processes_.end()) throw Error("unknown vision process '" + std::string(process) + "'");
  cell_.sync_arduino();
  const auto& p = cell_.scenario.params;
  CameraConfig camera = p.camera;
  camera.center_x_mm = p.conveyor.camera_window_x_mm;
  const FilterPosition wheel = cell_.arduino.filter_position(p.optics);
  const GrayImage image = render(cell_.parts, wheel, led_light(cell_.arduino.state().led_rgb, p.optics), camera, p.optics);
  const VisionRegister vr = sortcell::run_find(it->second, image, camera);
  cell_.log(Source::Robot, kind::VisionResult,
            {{"process", std::string(process)},
             {"filter", std::string(to_string(wheel.filter.name))},
             {"found", vr.found},
             {"x_mm", vr.x_mm},
             {"y_mm", vr.y_mm},
             {"rz_deg", vr.rz_deg}});
  return vr;
}

bool RobotNode::in_workspace(const Pose& target) const {
  return cell_.scenario.params.workspace.contains(target);
}

void RobotNode::begin_motion(tp::MotionKind k, const Pose& target, double duration_s) {
  motion_ = Motion{tool_, target, cell_.now, cell_.now + tp::seconds_to_us(duration_s)};
  cell_.log(Source::Robot, kind::MotionStart,
            {{"motion", std::string(motion_name(k))}, {"target", pose_json(target)}, {"duration_s", duration_s}});
}

void RobotNode::suction(bool on) {
  if (on) {
    if (held_) return;
    held_ = pick_candidate(cell_.parts, tool_, cell_.scenario.params.robot.pick_tolerance_mm);
    if (held_) {
      cell_.set_part_state(*held_, PartState::HeldByRobot);
      cell_.update_beam();
    }
    return;
  }
  if (!held_) return;
  auto& part = cell_.parts[*held_];
  if (cell_.bin.accepts(tool_)) {
    cell_.bin.contents.push_back(part.id);
    cell_.set_part_state(*held_, PartState::InRejectBin);
  } else {
    part.z_mm = 0.0;
    cell_.set_part_state(*held_, PartState::OnBelt);
  }
  held_.reset();
  cell_.update_beam();
}

Pose RobotNode::tool_now() const {
  if (!motion_) return tool_;
  const auto& m = *motion_;
  if (m.end_us <= m.start_us) return m.from;
  const double f = std::clamp(static_cast<double>(cell_.now - m.start_us) / static_cast<double>(m.end_us - m.start_us), 0.0, 1.0);
  return {m.from.x + (m.to.x - m.from.x) * f, m.from.y + (m.to.y - m.from.y) * f,
          m.from.z + (m.to.z - m.from.z) * f, m.from.rz + (m.to.rz - m.from.rz) * f};
}

RobotView RobotNode::view() const {
  RobotView v;
  v.phase = phase_;
  v.permitted = permitted_;
  v.paused = paused_;
  if (interp_) {
    v.program = interp_->program().name;
    v.statement_index = interp_->statement_index();
    const auto& stmts = interp_->program().statements;
    if (v.statement_index < stmts.size()) v.statement = tp::to_text(stmts[v.statement_index].op);
  }
  v.tool = tool_now();
  if (held_) v.held_part = cell_.parts[*held_].id;
  v.do_table = io_.do_table;
  v.fault = fault_text_;
  return v;
}

}  // namespace sortcell::sim::detail
