#include <gtest/gtest.h>

#include "sortcell/errors.hpp"
#include "sortcell/tp/corpus.hpp"
#include "support/fixtures.hpp"

using namespace sortcell;
using namespace sortcell::tp;
using namespace sortcell::testing;

TEST(Golden, ScanpartRed) { EXPECT_EQ(bench_cycle(ColorClass::Red).scan, read_golden("scanpart_red.golden")); }

TEST(Golden, SortpartPassBranch) {
  EXPECT_EQ(bench_cycle(ColorClass::Green, true).sort, read_golden("sortpart_pass.golden"));
}

TEST(Golden, SortpartRemoveBranch) {
  const auto run = bench_cycle(ColorClass::Green, false);
  EXPECT_EQ(run.sort, read_golden("sortpart_remove.golden"));
  EXPECT_EQ(run.bench.bin.contents, std::vector<int>{1});
  EXPECT_EQ(run.bench.parts[0].state, PartState::InRejectBin);
}

TEST(Scan, ColorFlagsPerColor) {
  for (auto c : {ColorClass::Red, ColorClass::Green, ColorClass::Blue}) {
    BenchCell b;
    b.parts = {centered_part(c)};
    const auto f = scan_cycle_sequence(b);
    EXPECT_EQ(f.red, c == ColorClass::Red);
    EXPECT_EQ(f.green, c == ColorClass::Green);
    EXPECT_EQ(f.blue, c == ColorClass::Blue);
    EXPECT_TRUE(b.io.get_do(130));
  }
}

TEST(Scan, EmptyWindow) {
  BenchCell b;
  const auto f = scan_cycle_sequence(b);
  EXPECT_FALSE(f.red || f.green || f.blue);
  EXPECT_TRUE(b.io.get_do(130));
}

TEST(Scan, EdgeBlueLightsGreenAndBlue) {
  BenchCell b;
  b.parts = {centered_part(ColorClass::Blue, 1, 80.0)};
  const auto f = scan_cycle_sequence(b);
  EXPECT_FALSE(f.red);
  EXPECT_TRUE(f.green);
  EXPECT_TRUE(f.blue);
}

TEST(Scan, WaitsCoverServoTravel) {
  // Red (90) -> green (180) -> blue (0): each RUN_FIND must see a settled wheel.
  BenchCell b;
  b.parts = {centered_part(ColorClass::Green)};
  EXPECT_NO_THROW(scan_cycle_sequence(b));
  EXPECT_EQ(b.arduino().state().commanded_angle_deg, 90);
}

TEST(Sort, PassBranchPulse) {
  const auto run = bench_cycle(ColorClass::Red, true);
  std::int64_t on = -1, off = -1;
  for (const auto& d : run.bench.do_log())
    if (d.index == 126) (d.value ? on : off) = d.t_us;
  EXPECT_EQ(off - on, 750'000);
  for (int i : {123, 124, 125, 130}) EXPECT_FALSE(run.bench.io.get_do(i));
  EXPECT_EQ(run.bench.parts[0].state, PartState::OnBelt);
}

TEST(Sort, RemoveBranchEndsClean) {
  const auto run = bench_cycle(ColorClass::Blue, false);
  for (int i : {111, 123, 124, 125, 130}) EXPECT_FALSE(run.bench.io.get_do(i));
}

TEST(Sort, MissedPickReleasesNothing) {
  BenchCell b;
  b.parts = {centered_part(ColorClass::Green)};
  auto regs = default_registers(580.0);
  execute(scanpart(), regs, b);
  b.parts[0].x_mm += 30.0;  // part moved after the scan
  b.io.di_table[121] = false;
  execute(sortpart(), regs, b);
  EXPECT_EQ(b.parts[0].state, PartState::OnBelt);
  EXPECT_TRUE(b.bin.contents.empty());
}

TEST(Errors, MotionWithoutVisionOffsetFaults) {
  BenchCell b;
  auto regs = default_registers(580.0);
  b.io.di_table[121] = false;
  EXPECT_THROW(execute(sortpart(), regs, b), RuntimeFault);
}

TEST(Errors, TargetOutsideWorkspaceFaults) {
  BenchCell b;
  b.workspace.max.z = 100.0;
  auto regs = default_registers(580.0);
  EXPECT_THROW(execute(sortpart(), regs, b), RuntimeFault);
}

TEST(Errors, UnknownVisionProcessFaults) {
  BenchCell b;
  auto regs = default_registers(580.0);
  const auto prog = parse("/PROG T\n1: VISION RUN_FIND 'YELSCAN'\n/END\n");
  EXPECT_THROW(execute(prog, regs, b), RuntimeFault);
}

TEST(Interpreter, StepsBlockOnTimedStatements) {
  BenchCell b;
  auto regs = default_registers(580.0);
  Interpreter in(scanpart(), regs);
  auto r = in.resume(b);
  EXPECT_EQ(r.kind, StepResult::Kind::Blocked);
  EXPECT_EQ(r.wait_us, 500'000);
  EXPECT_EQ(in.statement_index(), 6u);
  b.elapse(r.wait_us);
  r = in.resume(b);
  EXPECT_EQ(r.wait_us, 50'000);  // vision processing
  EXPECT_FALSE(in.finished());
}

TEST(Interpreter, JointMoveTakesFixedTime) {
  BenchCell b;
  auto regs = default_registers(580.0);
  const auto prog = parse("/PROG T\n1: J P[1] 100% FINE\n/END\n");
  const auto recs = execute(prog, regs, b);
  EXPECT_EQ(b.now_us(), 2'000'000);
  EXPECT_EQ(recs.size(), 1u);
}

TEST(Interpreter, LinearMoveTakesDistanceOverSpeed) {
  BenchCell b;
  b.tool = Pose{580, 300, 220, 0};
  auto regs = default_registers(580.0);
  const auto prog = parse("/PROG T\n1: L P[1] 50mm/sec FINE\n/END\n");
  execute(prog, regs, b);
  EXPECT_EQ(b.now_us(), 2'000'000);  // 100 mm down at 50 mm/s
  EXPECT_EQ(b.tool, (Pose{580, 300, 120, 0}));
}

TEST(Registers, Defaults) {
  const auto r = default_registers(580.0, 40.0);
  EXPECT_EQ(r.pr.at(80), (Pose{580, 0, 40, 0}));
  EXPECT_EQ(r.pr.at(81), (Pose{0, 0, 100, 0}));
  EXPECT_EQ(r.p.at(1), (Pose{580, 300, 120, 0}));
}
