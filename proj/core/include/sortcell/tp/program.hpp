#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sortcell::tp {

/// `[index:comment]` operand, e.g. PR[81:Z_OFFSET].
struct RegisterRef {
  int index = 0;
  std::string comment;

  friend bool operator==(const RegisterRef&, const RegisterRef&) = default;
};

enum class TargetKind { P, PR };

struct MotionTarget {
  TargetKind kind = TargetKind::P;
  RegisterRef ref;

  friend bool operator==(const MotionTarget&, const MotionTarget&) = default;
};

/// FINE (stop at point) or CNTn blending.
struct Termination {
  bool fine = true;
  int cnt = 0;

  friend bool operator==(const Termination&, const Termination&) = default;
};

struct SetDO {
  int index = 0;
  std::string label;
  bool value = false;
  friend bool operator==(const SetDO&, const SetDO&) = default;
};

struct Wait {
  double seconds = 0.0;
  friend bool operator==(const Wait&, const Wait&) = default;
};

struct VisionRunFind {
  std::string process;
  friend bool operator==(const VisionRunFind&, const VisionRunFind&) = default;
};

/// Loads VR[vr_index] from the last find; jumps to the label when nothing
/// was found.
struct VisionGetOffset {
  std::string process;
  int vr_index = 1;
  int jump_label = 0;
  friend bool operator==(const VisionGetOffset&, const VisionGetOffset&) = default;
};

struct Label {
  int n = 0;
  std::string comment;
  friend bool operator==(const Label&, const Label&) = default;
};

struct Jump {
  int n = 0;
  friend bool operator==(const Jump&, const Jump&) = default;
};

struct IfDiJump {
  int di_index = 0;
  std::string label;
  bool value = true;
  int jump_label = 0;
  friend bool operator==(const IfDiJump&, const IfDiJump&) = default;
};

struct SetUFrame {
  int n = 0;
  friend bool operator==(const SetUFrame&, const SetUFrame&) = default;
};

struct SetUTool {
  int n = 0;
  friend bool operator==(const SetUTool&, const SetUTool&) = default;
};

struct MotionJoint {
  MotionTarget target;
  double speed_pct = 0.0;
  Termination term;
  friend bool operator==(const MotionJoint&, const MotionJoint&) = default;
};

struct MotionLinear {
  MotionTarget target;
  double speed_mm_s = 0.0;
  Termination term;
  std::optional<int> voffset_vr;
  std::optional<RegisterRef> offset_pr;
  friend bool operator==(const MotionLinear&, const MotionLinear&) = default;
};

/// Numbered line with no instruction.
struct Blank {
  friend bool operator==(const Blank&, const Blank&) = default;
};

/// `! text` comment line.
struct Remark {
  std::string text;
  friend bool operator==(const Remark&, const Remark&) = default;
};

using TpStatement = std::variant<SetDO, Wait, VisionRunFind, VisionGetOffset, Label, Jump, IfDiJump,
                                 SetUFrame, SetUTool, MotionJoint, MotionLinear, Blank, Remark>;

struct Statement {
  TpStatement op;
  std::size_t source_line = 0;  // 1-based physical line in the source text
};

struct TpProgram {
  std::string name;
  std::vector<Statement> statements;
  std::map<int, std::size_t> label_index;  // label number -> statement index
};

/// Parses a listing in the pendant dialect. Line numbers in the source are
/// accepted but carry no meaning; `:`-prefixed continuation lines extend the
/// previous statement. Throws ParseError on any unrecognized statement, on
/// duplicate labels and on jumps to missing labels.
TpProgram parse(std::string_view source);

/// Single statement (no line number, no trailing ';').
TpStatement parse_statement(std::string_view text, std::size_t line_no = 1);

/// Normalized text for one statement.
std::string to_text(const TpStatement& st);

/// Normalized listing: "/PROG NAME", lines renumbered from 1, "/END".
std::string print(const TpProgram& program);

/// Structural equality of the statement lists (source lines ignored).
bool same_statements(const TpProgram& a, const TpProgram& b);

}  // namespace sortcell::tp
