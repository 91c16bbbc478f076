#include <cctype>
#include <charconv>

#include "sortcell/errors.hpp"
#include "sortcell/tp/program.hpp"

namespace sortcell::tp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Hand-rolled scanner over one logical statement.
class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at_end() {
    ws();
    return pos_ >= s_.size();
  }

  bool eat(std::string_view tok) {
    ws();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }

  /// Keyword followed by a non-identifier character (so "L" does not match "LBL").
  bool eat_word(std::string_view word) {
    ws();
    if (s_.substr(pos_, word.size()) != word) return false;
    const std::size_t next = pos_ + word.size();
    if (next < s_.size()) {
      const char c = s_[next];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
    }
    pos_ = next;
    return true;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  int integer() {
    ws();
    int v = 0;
    const auto* first = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc{} || ptr == first) fail("expected integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  /// Accepts ".50", "0.5", "100", "2".
  double number() {
    ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (start == pos_) fail("expected number");
    std::string text(s_.substr(start, pos_ - start));
    if (text.front() == '.') text.insert(text.begin(), '0');
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) fail("malformed number '" + text + "'");
    return v;
  }

  std::string quoted() {
    expect("'");
    const std::size_t close = s_.find('\'', pos_);
    if (close == std::string_view::npos) fail("unterminated quoted name");
    std::string out(s_.substr(pos_, close - pos_));
    pos_ = close + 1;
    if (out.empty()) fail("empty quoted name");
    return out;
  }

  /// `[n]` or `[n:comment]`.
  RegisterRef bracket() {
    expect("[");
    RegisterRef ref;
    ref.index = integer();
    ws();
    if (eat(":")) {
      const std::size_t close = s_.find(']', pos_);
      if (close == std::string_view::npos) fail("missing ']'");
      ref.comment = std::string(trim(s_.substr(pos_, close - pos_)));
      pos_ = close;
    }
    expect("]");
    return ref;
  }

  bool on_off() {
    if (eat_word("ON")) return true;
    if (eat_word("OFF")) return false;
    fail("expected ON or OFF");
  }

  Termination termination() {
    if (eat_word("FINE")) return {true, 0};
    if (eat("CNT")) return {false, integer()};
    fail("expected FINE or CNT");
  }

  MotionTarget target() {
    MotionTarget t;
    if (eat("PR")) {
      t.kind = TargetKind::PR;
    } else if (eat("P")) {
      t.kind = TargetKind::P;
    } else {
      fail("expected P[] or PR[] target");
    }
    t.ref = bracket();
    return t;
  }

  std::string rest() {
    ws();
    std::string out(s_.substr(pos_));
    pos_ = s_.size();
    return out;
  }

  void done() {
    if (!at_end()) fail("unexpected trailing text '" + std::string(s_.substr(pos_)) + "'");
  }

  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(line_, reason); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

TpStatement parse_motion(Cursor& c, bool joint) {
  MotionTarget target = c.target();
  const double speed = c.number();
  if (speed <= 0.0) c.fail("motion speed must be positive");
  if (joint) {
    c.expect("%");
    MotionJoint m{std::move(target), speed, c.termination()};
    c.done();
    return m;
  }
  c.expect("mm/sec");
  MotionLinear m{std::move(target), speed, c.termination(), std::nullopt, std::nullopt};
  while (!c.at_end()) {
    if (c.eat_word("VOFFSET")) {
      c.expect(",");
      c.expect("VR");
      m.voffset_vr = c.bracket().index;
    } else if (c.eat_word("Offset")) {
      c.expect(",");
      c.expect("PR");
      m.offset_pr = c.bracket();
    } else {
      c.fail("unknown motion modifier");
    }
  }
  return m;
}

}  // namespace

TpStatement parse_statement(std::string_view text, std::size_t line_no) {
  text = trim(text);
  if (!text.empty() && text.back() == ';') text = trim(text.substr(0, text.size() - 1));
  Cursor c(text, line_no);
  if (c.at_end()) return Blank{};

  if (c.eat("!")) return Remark{c.rest()};

  if (c.eat("DO")) {
    const RegisterRef ref = c.bracket();
    c.expect("=");
    SetDO st{ref.index, ref.comment, c.on_off()};
    c.done();
    return st;
  }
  if (c.eat_word("WAIT")) {
    Wait st{c.number()};
    c.expect("(sec)");
    c.done();
    return st;
  }
  if (c.eat_word("VISION")) {
    if (c.eat_word("RUN_FIND")) {
      VisionRunFind st{c.quoted()};
      c.done();
      return st;
    }
    if (c.eat_word("GET_OFFSET")) {
      VisionGetOffset st;
      st.process = c.quoted();
      c.expect("VR");
      st.vr_index = c.bracket().index;
      c.expect("JMP");
      c.expect("LBL");
      st.jump_label = c.bracket().index;
      c.done();
      return st;
    }
    c.fail("unknown VISION command");
  }
  if (c.eat("LBL")) {
    const RegisterRef ref = c.bracket();
    c.done();
    return Label{ref.index, ref.comment};
  }
  if (c.eat_word("JMP")) {
    c.expect("LBL");
    Jump st{c.bracket().index};
    c.done();
    return st;
  }
  if (c.eat_word("IF")) {
    c.expect("DI");
    const RegisterRef ref = c.bracket();
    c.expect("=");
    const bool value = c.on_off();
    c.expect(",");
    c.expect("JMP");
    c.expect("LBL");
    IfDiJump st{ref.index, ref.comment, value, c.bracket().index};
    c.done();
    return st;
  }
  if (c.eat_word("UFRAME_NUM")) {
    c.expect("=");
    SetUFrame st{c.integer()};
    c.done();
    return st;
  }
  if (c.eat_word("UTOOL_NUM")) {
    c.expect("=");
    SetUTool st{c.integer()};
    c.done();
    return st;
  }
  if (c.eat_word("J")) return parse_motion(c, true);
  if (c.eat_word("L")) return parse_motion(c, false);

  c.fail("unrecognized statement '" + std::string(text) + "'");
}

TpProgram parse(std::string_view source) {
  TpProgram program;
  struct Pending {
    std::string text;
    std::size_t line;
  };
  std::vector<Pending> logical;
  bool ended = false;
  std::size_t line_no = 0;

  while (!source.empty()) {
    const std::size_t nl = source.find('\n');
    std::string_view raw = source.substr(0, nl);
    source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (ended) throw ParseError(line_no, "text after /END");

    if (line.starts_with("/PROG")) {
      const std::string_view rest = trim(line.substr(5));
      program.name = std::string(rest.substr(0, rest.find_first_of(" \t")));
      if (program.name.empty()) throw ParseError(line_no, "/PROG without a name");
      continue;
    }
    if (line == "/END") {
      ended = true;
      continue;
    }
    if (line == "/MN") continue;
    if (line.front() == ':') {
      if (logical.empty()) throw ParseError(line_no, "continuation line without a statement");
      logical.back().text += ' ';
      logical.back().text += trim(line.substr(1));
      continue;
    }
    // Optional "N:" prefix.
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    std::string_view body = line;
    if (i > 0 && i < line.size() && line[i] == ':') {
      body = line.substr(i + 1);
    } else if (i > 0 && i == line.size()) {
      throw ParseError(line_no, "line number without ':'");
    }
    logical.push_back({std::string(trim(body)), line_no});
  }

  for (const auto& p : logical) program.statements.push_back({parse_statement(p.text, p.line), p.line});

  for (std::size_t idx = 0; idx < program.statements.size(); ++idx) {
    const auto& st = program.statements[idx];
    if (const auto* lbl = std::get_if<Label>(&st.op)) {
      if (!program.label_index.emplace(lbl->n, idx).second)
        throw ParseError(st.source_line, "duplicate LBL[" + std::to_string(lbl->n) + "]");
    }
  }
  auto check = [&](int n, std::size_t line) {
    if (!program.label_index.contains(n)) throw ParseError(line, "jump to undefined LBL[" + std::to_string(n) + "]");
  };
  for (const auto& st : program.statements) {
    if (const auto* j = std::get_if<Jump>(&st.op)) check(j->n, st.source_line);
    if (const auto* j = std::get_if<IfDiJump>(&st.op)) check(j->jump_label, st.source_line);
    if (const auto* j = std::get_if<VisionGetOffset>(&st.op)) check(j->jump_label, st.source_line);
  }
  return program;
}

bool same_statements(const TpProgram& a, const TpProgram& b) {
  if (a.name != b.name || a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i)
    if (!(a.statements[i].op == b.statements[i].op)) return false;
  return true;
}

}  // namespace sortcell::tp
