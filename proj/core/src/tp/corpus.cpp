#include "sortcell/tp/corpus.hpp"

#include "sortcell/errors.hpp"

namespace sortcell::tp {

namespace {

constexpr std::string_view kScanPart = R"(/PROG SCANPART

1: DO[123:RED]=OFF
2: DO[124:GREEN]=OFF
3: DO[125:BLUE]=OFF
4:
5: DO[110:CALL GREEN]=OFF
6: DO[112:CALL BLUE]=OFF
7: WAIT .50(sec)
8: VISION RUN_FIND 'REDSCAN'
9: VISION GET_OFFSET 'REDSCAN' VR[1] JMP LBL[10]
10: DO[123:RED]=ON
11: LBL[10]
12:
13: DO[110:CALL GREEN]=ON
14: WAIT .50(sec)
15: VISION RUN_FIND 'GRNSCAN'
16: VISION GET_OFFSET 'GRNSCAN' VR[1] JMP LBL[20]
17: DO[124:GREEN]=ON
18: LBL[20]
19: DO[110:CALL GREEN]=OFF
20:
21: DO[112:CALL BLUE]=ON
22: WAIT .80(sec)
23: VISION RUN_FIND 'BLUSCAN'
24: VISION GET_OFFSET 'BLUSCAN' VR[1] JMP LBL[30]
25: DO[125:BLUE]=ON
26: LBL[30]
27: DO[112:CALL BLUE]=OFF
28:
29: DO[130:SCAN COMPLETE]=ON
/END
)";

constexpr std::string_view kSortPart = R"(/PROG SORTPART

1: UFRAME_NUM=8
2: UTOOL_NUM=8
3: J P[1] 2% FINE
4:
5: IF DI[121:REMOVE PART]=ON, JMP LBL[10]
6:
7: L PR[80:VISION REF] 100mm/sec FINE VOFFSET,VR[1]
   : Offset,PR[81:Z_OFFSET]
8: L PR[80:VISION REF] 50mm/sec FINE VOFFSET,VR[1]
9: WAIT .50(sec)
10: DO[111:SUCTION CUP]=ON
11: WAIT .50(sec)
12: L PR[80:VISION REF] 50mm/sec FINE VOFFSET,VR[1]
   : Offset,PR[81:Z_OFFSET]
13: L P[1] 100mm/sec FINE Offset,PR[81:Z_OFFSET]
14: L P[1] 75mm/sec FINE
15: WAIT .50(sec)
16: DO[111:SUCTION CUP]=OFF
17: WAIT .50(sec)
18:
19: JMP LBL[11]
20: LBL[10]
21: DO[126:CONVEYOR FWD]=ON
22: WAIT .75(sec)
23: DO[126:CONVEYOR FWD]=OFF
24:
25: LBL[11]
26: DO[123:RED]=OFF
27: DO[124:GREEN]=OFF
28: DO[125:BLUE]=OFF
29: DO[130:SCAN COMPLETE]=OFF ;
/END
)";

}  // namespace

std::string_view scanpart_source() noexcept { return kScanPart; }
std::string_view sortpart_source() noexcept { return kSortPart; }

const TpProgram& scanpart() {
  static const TpProgram program = parse(kScanPart);
  return program;
}

const TpProgram& sortpart() {
  static const TpProgram program = parse(kSortPart);
  return program;
}

std::map<std::string, VisionProcess, std::less<>> default_processes() {
  std::map<std::string, VisionProcess, std::less<>> out;
  for (const char* name : {"REDSCAN", "GRNSCAN", "BLUSCAN"}) {
    VisionProcess p;
    p.name = name;
    out.emplace(name, p);
  }
  return out;
}

BenchCell::BenchCell() : processes(default_processes()) {}

void BenchCell::set_do(int index, std::string_view, bool value) {
  const bool before = io.get_do(index);
  io.do_table[index] = value;
  if (before != value) do_log_.push_back({now_us_, index, value});
  const auto* coupling = default_wiring().for_do(index);
  if (!coupling) return;
  switch (coupling->sink) {
    case DoSink::ArduinoInputA:
    case DoSink::ArduinoInputB:
      arduino_.set_inputs(relay_line(io.get_do(110)), relay_line(io.get_do(112)));
      break;
    case DoSink::Suction:
      if (before != value) on_suction(value);
      break;
    case DoSink::Assembly:
      break;
  }
}

VisionRegister BenchCell::run_find(std::string_view process) {
  const auto it = processes.find(process);
  if (it == processes.end()) throw Error("unknown vision process '" + std::string(process) + "'");
  const LightSpec light = led_enabled ? led_light(arduino_.state().led_rgb, optics) : ambient_light(optics);
  const GrayImage img = render(parts, arduino_.filter_position(optics), light, camera, optics);
  return sortcell::run_find(it->second, img, camera);
}

void BenchCell::begin_motion(MotionKind, const Pose& target, double duration_s) {
  pending_target_ = target;
  motion_end_us_ = now_us_ + seconds_to_us(duration_s);
}

void BenchCell::elapse(std::int64_t us) {
  arduino_.advance(static_cast<double>(us) / 1e6);
  now_us_ += us;
  if (pending_target_ && now_us_ >= motion_end_us_) {
    tool = *pending_target_;
    pending_target_.reset();
    motions_.emplace_back(now_us_, tool);
    if (held_) {
      auto& p = parts[*held_];
      p.x_mm = tool.x;
      p.y_mm = tool.y;
      p.z_mm = tool.z - p.size_mm;
    }
  }
}

void BenchCell::on_suction(bool on) {
  if (on) {
    if (held_) return;
    held_ = pick_candidate(parts, tool, pick_tolerance_mm);
    if (held_) parts[*held_].state = PartState::HeldByRobot;
    return;
  }
  if (!held_) return;
  auto& p = parts[*held_];
  if (bin.accepts(tool)) {
    p.state = PartState::InRejectBin;
    bin.contents.push_back(p.id);
  } else {
    p.state = PartState::OnBelt;
    p.z_mm = 0.0;
  }
  held_.reset();
}

ColorFlags scan_cycle_sequence(BenchCell& env, MotionTiming timing) {
  RobotRegisters regs = default_registers(env.camera.center_x_mm);
  execute(scanpart(), regs, env, timing);
  return {env.io.get_do(123), env.io.get_do(124), env.io.get_do(125)};
}

}  // namespace sortcell::tp
