#include <charconv>
#include <cstdio>

#include "sortcell/tp/program.hpp"

namespace sortcell::tp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string ref_text(const RegisterRef& r) {
  std::string out = "[" + std::to_string(r.index);
  if (!r.comment.empty()) out += ":" + r.comment;
  return out + "]";
}

std::string shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

// Pendant style: two decimals, no leading zero (".50", "1.25").
std::string seconds_text(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", s);
  std::string out(buf);
  if (out.starts_with("0.")) out.erase(0, 1);
  return out;
}

std::string term_text(const Termination& t) { return t.fine ? "FINE" : "CNT" + std::to_string(t.cnt); }

std::string target_text(const MotionTarget& t) {
  return (t.kind == TargetKind::PR ? "PR" : "P") + ref_text(t.ref);
}

}  // namespace

std::string to_text(const TpStatement& st) {
  return std::visit(
      Overloaded{
          [](const SetDO& s) { return "DO" + ref_text({s.index, s.label}) + (s.value ? "=ON" : "=OFF"); },
          [](const Wait& s) { return "WAIT " + seconds_text(s.seconds) + "(sec)"; },
          [](const VisionRunFind& s) { return "VISION RUN_FIND '" + s.process + "'"; },
          [](const VisionGetOffset& s) {
            return "VISION GET_OFFSET '" + s.process + "' VR[" + std::to_string(s.vr_index) + "] JMP LBL[" +
                   std::to_string(s.jump_label) + "]";
          },
          [](const Label& s) { return "LBL" + ref_text({s.n, s.comment}); },
          [](const Jump& s) { return "JMP LBL[" + std::to_string(s.n) + "]"; },
          [](const IfDiJump& s) {
            return "IF DI" + ref_text({s.di_index, s.label}) + (s.value ? "=ON" : "=OFF") + ", JMP LBL[" +
                   std::to_string(s.jump_label) + "]";
          },
          [](const SetUFrame& s) { return "UFRAME_NUM=" + std::to_string(s.n); },
          [](const SetUTool& s) { return "UTOOL_NUM=" + std::to_string(s.n); },
          [](const MotionJoint& s) {
            return "J " + target_text(s.target) + " " + shortest(s.speed_pct) + "% " + term_text(s.term);
          },
          [](const MotionLinear& s) {
            std::string out = "L " + target_text(s.target) + " " + shortest(s.speed_mm_s) + "mm/sec " + term_text(s.term);
            if (s.voffset_vr) out += " VOFFSET,VR[" + std::to_string(*s.voffset_vr) + "]";
            if (s.offset_pr) out += " Offset,PR" + ref_text(*s.offset_pr);
            return out;
          },
          [](const Blank&) { return std::string(); },
          [](const Remark& s) { return "!" + s.text; },
      },
      st);
}

std::string print(const TpProgram& program) {
  std::string out = "/PROG " + program.name + "\n";
  for (std::size_t i = 0; i < program.statements.size(); ++i) {
    const std::string text = to_text(program.statements[i].op);
    out += std::to_string(i + 1) + ":";
    if (!text.empty()) out += " " + text + " ;";
    out += "\n";
  }
  out += "/END\n";
  return out;
}

}  // namespace sortcell::tp
