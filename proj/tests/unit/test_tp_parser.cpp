#include <gtest/gtest.h>

#include "sortcell/errors.hpp"
#include "sortcell/tp/corpus.hpp"
#include "sortcell/tp/program.hpp"

using namespace sortcell;
using namespace sortcell::tp;

TEST(Statement, SetDo) {
  EXPECT_EQ(parse_statement("DO[123:RED]=OFF"), TpStatement(SetDO{123, "RED", false}));
  EXPECT_EQ(parse_statement("DO[130:SCAN COMPLETE]=ON"), TpStatement(SetDO{130, "SCAN COMPLETE", true}));
}

TEST(Statement, GetOffset) {
  EXPECT_EQ(parse_statement("VISION GET_OFFSET 'GRNSCAN' VR[1] JMP LBL[20]"),
            TpStatement(VisionGetOffset{"GRNSCAN", 1, 20}));
}

TEST(Statement, Wait) {
  EXPECT_EQ(parse_statement("WAIT .75(sec)"), TpStatement(Wait{0.75}));
  EXPECT_EQ(parse_statement("WAIT 1.5(sec)"), TpStatement(Wait{1.5}));
}

TEST(Statement, RunFind) { EXPECT_EQ(parse_statement("VISION RUN_FIND 'REDSCAN'"), TpStatement(VisionRunFind{"REDSCAN"})); }

TEST(Statement, IfDi) {
  EXPECT_EQ(parse_statement("IF DI[121:REMOVE PART]=ON, JMP LBL[10]"),
            TpStatement(IfDiJump{121, "REMOVE PART", true, 10}));
}

TEST(Statement, Motion) {
  const auto j = std::get<MotionJoint>(parse_statement("J P[1] 2% FINE"));
  EXPECT_EQ(j.target.kind, TargetKind::P);
  EXPECT_EQ(j.target.ref.index, 1);
  EXPECT_EQ(j.speed_pct, 2.0);
  EXPECT_TRUE(j.term.fine);

  const auto l = std::get<MotionLinear>(
      parse_statement("L PR[80:VISION REF] 100mm/sec FINE VOFFSET,VR[1] Offset,PR[81:Z_OFFSET]"));
  EXPECT_EQ(l.target.kind, TargetKind::PR);
  EXPECT_EQ(l.target.ref, (RegisterRef{80, "VISION REF"}));
  EXPECT_EQ(l.speed_mm_s, 100.0);
  EXPECT_EQ(l.voffset_vr, 1);
  ASSERT_TRUE(l.offset_pr.has_value());
  EXPECT_EQ(l.offset_pr->index, 81);

  const auto c = std::get<MotionLinear>(parse_statement("L P[2] 500mm/sec CNT50"));
  EXPECT_FALSE(c.term.fine);
  EXPECT_EQ(c.term.cnt, 50);
}

TEST(Statement, FramesLabelsJumpsBlankRemark) {
  EXPECT_EQ(parse_statement("UFRAME_NUM=8"), TpStatement(SetUFrame{8}));
  EXPECT_EQ(parse_statement("UTOOL_NUM=8"), TpStatement(SetUTool{8}));
  EXPECT_EQ(parse_statement("LBL[10]"), TpStatement(Label{10, ""}));
  EXPECT_EQ(parse_statement("JMP LBL[11]"), TpStatement(Jump{11}));
  EXPECT_EQ(parse_statement(""), TpStatement(Blank{}));
  EXPECT_EQ(parse_statement("! pick the part"), TpStatement(Remark{"pick the part"}));
}

TEST(Statement, MalformedIsParseError) {
  EXPECT_THROW(parse_statement("DO[=ON"), ParseError);
  EXPECT_THROW(parse_statement("WAIT (sec)"), ParseError);
  EXPECT_THROW(parse_statement("FLY P[1]"), ParseError);
}

TEST(Program, MalformedLineReportsItsLine) {
  try {
    parse("/PROG X\n1: DO[123:RED]=OFF\n2: DO[=ON\n/END\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line_no(), 3u);
  }
}

TEST(Program, LabelErrors) {
  EXPECT_THROW(parse("/PROG X\n1: JMP LBL[5]\n/END\n"), ParseError);
  EXPECT_THROW(parse("/PROG X\n1: LBL[5]\n2: LBL[5]\n/END\n"), ParseError);
  EXPECT_THROW(parse("/PROG X\n1: WAIT .50(sec)\n/END\n2: WAIT .50(sec)\n"), ParseError);
}

TEST(Corpus, ScanpartVerbatim) {
  const auto& p = scanpart();
  EXPECT_EQ(p.name, "SCANPART");
  ASSERT_EQ(p.statements.size(), 29u);
  EXPECT_EQ(p.statements[0].op, TpStatement(SetDO{123, "RED", false}));
  EXPECT_EQ(p.statements[3].op, TpStatement(Blank{}));
  EXPECT_EQ(p.statements[21].op, TpStatement(Wait{0.80}));
  EXPECT_EQ(p.statements[28].op, TpStatement(SetDO{130, "SCAN COMPLETE", true}));
  EXPECT_EQ(p.label_index.at(10), 10u);
  EXPECT_EQ(p.label_index.at(20), 17u);
  EXPECT_EQ(p.label_index.at(30), 25u);
}

TEST(Corpus, SortpartVerbatim) {
  const auto& p = sortpart();
  EXPECT_EQ(p.name, "SORTPART");
  ASSERT_EQ(p.statements.size(), 29u);
  // The continuation line folds into statement 7.
  const auto& l = std::get<MotionLinear>(p.statements[6].op);
  EXPECT_TRUE(l.offset_pr.has_value());
  EXPECT_EQ(p.statements[21].op, TpStatement(Wait{0.75}));
  EXPECT_EQ(p.statements[28].op, TpStatement(SetDO{130, "SCAN COMPLETE", false}));
}

TEST(Corpus, PrintParseRoundTrip) {
  for (const auto* p : {&scanpart(), &sortpart()}) {
    const auto again = parse(print(*p));
    EXPECT_TRUE(same_statements(*p, again));
    EXPECT_EQ(print(again), print(*p));
  }
}

// to_text then parse_statement is the identity on every corpus statement.
TEST(CorpusProperty, StatementTextRoundTrip) {
  for (const auto* p : {&scanpart(), &sortpart()})
    for (const auto& st : p->statements) ASSERT_EQ(parse_statement(to_text(st.op)), st.op) << to_text(st.op);
}
