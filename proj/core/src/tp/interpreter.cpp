#include "sortcell/tp/interpreter.hpp"

#include <cmath>

#include "sortcell/errors.hpp"

namespace sortcell::tp {

bool RobotIO::get_do(int index) const noexcept {
  const auto it = do_table.find(index);
  return it != do_table.end() && it->second;
}

bool RobotIO::get_di(int index) const noexcept {
  const auto it = di_table.find(index);
  return it != di_table.end() && it->second;
}

RobotRegisters default_registers(double camera_x_mm, double part_top_mm) {
  RobotRegisters r;
  r.pr[80] = Pose{camera_x_mm, 0.0, part_top_mm, 0.0};
  r.pr[81] = Pose{0.0, 0.0, 100.0, 0.0};
  r.p[1] = Pose{camera_x_mm, 300.0, 120.0, 0.0};
  return r;
}

std::int64_t seconds_to_us(double s) noexcept { return std::llround(s * 1e6); }

Interpreter::Interpreter(const TpProgram& program, RobotRegisters& registers, MotionTiming timing)
    : program_(&program), regs_(&registers), timing_(timing) {}

Pose Interpreter::resolve_target(const MotionTarget& t, const std::string& text) const {
  const auto& table = t.kind == TargetKind::PR ? regs_->pr : regs_->p;
  const auto it = table.find(t.ref.index);
  if (it == table.end())
    throw RuntimeFault(text, std::string(t.kind == TargetKind::PR ? "PR[" : "P[") + std::to_string(t.ref.index) +
                                 "] is not set");
  return it->second;
}

StepResult Interpreter::resume(RobotEnvironment& env) {
  const auto& stmts = program_->statements;
  auto jump_to = [&](int label) {
    const auto it = program_->label_index.find(label);
    if (it == program_->label_index.end())
      throw RuntimeFault(to_text(stmts[current_].op), "LBL[" + std::to_string(label) + "] is unreachable");
    pc_ = it->second + 1;
  };

  while (pc_ < stmts.size()) {
    current_ = pc_;
    const auto& op = stmts[pc_].op;
    ++pc_;
    if (on_statement) on_statement(current_);

    if (const auto* s = std::get_if<SetDO>(&op)) {
      env.set_do(s->index, s->label, s->value);
    } else if (const auto* s = std::get_if<Wait>(&op)) {
      return {StepResult::Kind::Blocked, seconds_to_us(s->seconds)};
    } else if (const auto* s = std::get_if<VisionRunFind>(&op)) {
      try {
        last_find_[s->process] = env.run_find(s->process);
      } catch (const RuntimeFault&) {
        throw;
      } catch (const Error& e) {
        throw RuntimeFault(to_text(op), e.what());
      }
      return {StepResult::Kind::Blocked, seconds_to_us(timing_.vision_processing_s)};
    } else if (const auto* s = std::get_if<VisionGetOffset>(&op)) {
      if (s->vr_index < 1 || s->vr_index > kVisionRegisterCount)
        throw RuntimeFault(to_text(op), "VR index out of range");
      const auto it = last_find_.find(s->process);
      if (it == last_find_.end() || !it->second.found) {
        jump_to(s->jump_label);
      } else {
        regs_->vr[static_cast<std::size_t>(s->vr_index)] = it->second;
        regs_->vr_loaded[static_cast<std::size_t>(s->vr_index)] = true;
      }
    } else if (const auto* s = std::get_if<Jump>(&op)) {
      jump_to(s->n);
    } else if (const auto* s = std::get_if<IfDiJump>(&op)) {
      if (env.get_di(s->di_index) == s->value) jump_to(s->jump_label);
    } else if (const auto* s = std::get_if<SetUFrame>(&op)) {
      regs_->uframe = s->n;
      env.set_frames(regs_->uframe, regs_->utool);
    } else if (const auto* s = std::get_if<SetUTool>(&op)) {
      regs_->utool = s->n;
      env.set_frames(regs_->uframe, regs_->utool);
    } else if (const auto* s = std::get_if<MotionJoint>(&op)) {
      const std::string text = to_text(op);
      const Pose target = resolve_target(s->target, text);
      if (!env.in_workspace(target)) throw RuntimeFault(text, "target outside workspace");
      env.begin_motion(MotionKind::Joint, target, timing_.joint_move_s);
      return {StepResult::Kind::Blocked, seconds_to_us(timing_.joint_move_s)};
    } else if (const auto* s = std::get_if<MotionLinear>(&op)) {
      const std::string text = to_text(op);
      Pose target = resolve_target(s->target, text);
      if (s->voffset_vr) {
        const int i = *s->voffset_vr;
        if (i < 1 || i > kVisionRegisterCount) throw RuntimeFault(text, "VR index out of range");
        if (!regs_->vr_loaded[static_cast<std::size_t>(i)])
          throw RuntimeFault(text, "VR[" + std::to_string(i) + "] has no offset loaded");
        const auto& vr = regs_->vr[static_cast<std::size_t>(i)];
        target.x += vr.x_mm;
        target.y += vr.y_mm;
        target.rz += vr.rz_deg;
      }
      if (s->offset_pr) {
        const auto it = regs_->pr.find(s->offset_pr->index);
        if (it == regs_->pr.end())
          throw RuntimeFault(text, "PR[" + std::to_string(s->offset_pr->index) + "] is not set");
        target.x += it->second.x;
        target.y += it->second.y;
        target.z += it->second.z;
      }
      if (!env.in_workspace(target)) throw RuntimeFault(text, "target outside workspace");
      const double duration = distance_mm(env.tool_pose(), target) / s->speed_mm_s;
      env.begin_motion(MotionKind::Linear, target, duration);
      return {StepResult::Kind::Blocked, seconds_to_us(duration)};
    }
    // Label, Blank, Remark: no effect.
  }
  finished_ = true;
  current_ = stmts.size();
  return {StepResult::Kind::Completed, 0};
}

std::vector<ExecRecord> execute(const TpProgram& program, RobotRegisters& registers,
                                StandaloneEnvironment& env, MotionTiming timing) {
  Interpreter interp(program, registers, timing);
  std::vector<ExecRecord> records;
  interp.on_statement = [&](std::size_t idx) {
    records.push_back({env.now_us(), idx, to_text(program.statements[idx].op)});
  };
  for (;;) {
    const StepResult r = interp.resume(env);
    if (r.kind == StepResult::Kind::Completed) break;
    env.elapse(r.wait_us);
  }
  return records;
}

}  // namespace sortcell::tp
