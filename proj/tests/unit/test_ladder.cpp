#include <gtest/gtest.h>

#include "sortcell/errors.hpp"
#include "sortcell/plc/ladder_json.hpp"
#include "support/ladder_probe.hpp"

using namespace sortcell;
using namespace sortcell::plc;
using namespace sortcell::testing;

namespace {

struct Plc {
  TagDatabase tags{default_program()};
  void scan(int n = 1) {
    for (int i = 0; i < n; ++i) scan_once(default_program(), tags, 10);
  }
};

}  // namespace

TEST(Ladder, DefaultProgramValidates) { EXPECT_NO_THROW(validate(default_program())); }

TEST(Ladder, QuiescentAfterPowerUp) {
  Plc p;
  p.scan();
  EXPECT_FALSE(p.tags.get("Enable"));
  EXPECT_FALSE(p.tags.get("ConveyorRun"));
  EXPECT_FALSE(p.tags.get("Robot_Enable"));
  EXPECT_FALSE(p.tags.get("Robot_Scan_Program"));
  // Constant UOP permissives: word 141 without Enable is 13.
  EXPECT_TRUE(p.tags.get("Robot_IMSTP"));
  EXPECT_TRUE(p.tags.get("Robot_SFSPD"));
  EXPECT_TRUE(p.tags.get("Robot_Stop"));
  EXPECT_FALSE(p.tags.get("Robot_HOLD"));
}

TEST(Ladder, StartSealsInStopBreaksIt) {
  Plc p;
  p.tags.set("HMI_Start", true);
  p.scan();
  p.tags.set("HMI_Start", false);
  p.scan(5);
  EXPECT_TRUE(p.tags.get("Enable"));
  EXPECT_TRUE(p.tags.get("ConveyorRun"));
  EXPECT_TRUE(p.tags.get("Robot_Enable"));

  p.tags.set("Stop_PB", true);
  p.scan();
  p.tags.set("Stop_PB", false);
  p.scan();
  EXPECT_FALSE(p.tags.get("Enable"));
  EXPECT_FALSE(p.tags.get("ConveyorRun"));

  p.tags.set("Start_PB", true);
  p.scan();
  p.tags.set("Start_PB", false);
  p.scan();
  EXPECT_TRUE(p.tags.get("ConveyorRun"));
}

TEST(Ladder, StopWinsOverStart) {
  Plc p;
  p.tags.set("HMI_Start", true);
  p.tags.set("HMI_Stop", true);
  p.scan();
  EXPECT_FALSE(p.tags.get("Enable"));
}

TEST(Ladder, BeamStopsConveyorAndRequestsScan) {
  Plc p;
  p.tags.set("HMI_Start", true);
  p.scan();
  p.tags.set("Beam", true);
  p.scan();
  EXPECT_FALSE(p.tags.get("ConveyorRun"));
  EXPECT_TRUE(p.tags.get("Robot_Scan_Program"));

  p.tags.set("Robot_Scan_Done", true);
  p.scan();
  EXPECT_FALSE(p.tags.get("Robot_Scan_Program"));
  EXPECT_TRUE(p.tags.get("ScanAck"));

  // Robot pulses conveyor forward to carry the part out.
  p.tags.set("Robot_Scan_Done", false);
  p.tags.set("Robot_Conveyor_Fwd", true);
  p.scan();
  EXPECT_TRUE(p.tags.get("ConveyorRun"));
  EXPECT_FALSE(p.tags.get("Robot_Scan_Program"));  // ack holds the request off

  p.tags.set("Beam", false);
  p.tags.set("Robot_Conveyor_Fwd", false);
  p.scan();
  EXPECT_FALSE(p.tags.get("PartPresent"));
  EXPECT_FALSE(p.tags.get("ScanAck"));
  EXPECT_FALSE(p.tags.get("ConveyorRun"));  // run rung precedes the release rung
  p.scan();
  EXPECT_TRUE(p.tags.get("ConveyorRun"));
}

TEST(Ladder, RobotFaultHoldsConveyor) {
  Plc p;
  p.tags.set("HMI_Start", true);
  p.tags.set("Robot_Fault", true);
  p.scan();
  EXPECT_FALSE(p.tags.get("ConveyorRun"));
  p.tags.set("Robot_Fault", false);
  p.scan();
  EXPECT_TRUE(p.tags.get("ConveyorRun"));
}

TEST(Ladder, VerdictTimerDoneOnScan21) {
  const auto v = ladder_verdict({true, false, false}, {true, false, false}, false);
  EXPECT_TRUE(v.part_match);
  EXPECT_FALSE(v.remove);
  EXPECT_EQ(v.scans_to_verdict, 21);

  Plc p;
  p.tags.set("Robot_Scan_Done", true);
  p.scan();
  EXPECT_EQ(p.tags.timer("T1").acc_ms, 0);
  EXPECT_TRUE(p.tags.get("T1.TT"));
  p.scan(19);
  EXPECT_EQ(p.tags.timer("T1").acc_ms, 190);
  EXPECT_FALSE(p.tags.get("T1.DN"));
  p.scan();
  EXPECT_TRUE(p.tags.get("T1.DN"));
  EXPECT_FALSE(p.tags.get("T1.TT"));
  p.tags.set("Robot_Scan_Done", false);
  p.scan();
  EXPECT_EQ(p.tags.timer("T1"), (TimerState{200, 0, false, false, false}));
}

TEST(Ladder, FaultResetPulseLasts500ms) {
  Plc p;
  p.tags.set("Fault_Reset_PB", true);
  int on_scans = 0;
  for (int i = 0; i < 100; ++i) {
    p.scan();
    on_scans += p.tags.get("Robot_Fault_Reset");
  }
  EXPECT_EQ(on_scans, 50);
  EXPECT_FALSE(p.tags.get("FR_Pulse"));
}

TEST(Ladder, RemoveWhenNoMatch) {
  const auto v = ladder_verdict({false, true, false}, {true, false, false}, false);
  EXPECT_FALSE(v.part_match);
  EXPECT_TRUE(v.remove);
}

TEST(LadderProperty, AgreesWithBruteForceOn128Cases) {
  int checked = 0;
  for (int d = 0; d < 8; ++d)
    for (int s = 0; s < 8; ++s)
      for (bool ov : {false, true}) {
        const auto det = flags_from_bits(d);
        const auto sel = flags_from_bits(s);
        const bool keep = brute_force_keep(det, sel, ov);
        for (bool pb : {false, true}) {
          const auto v = ladder_verdict(det, sel, ov, pb);
          ASSERT_EQ(v.part_match, keep) << d << " " << s << " " << ov;
          ASSERT_EQ(v.remove, !keep);
          ASSERT_EQ(v.scans_to_verdict, 21);
        }
        ++checked;
      }
  EXPECT_EQ(checked, 128);
}

TEST(LadderJson, RoundTrip) {
  const auto& p = default_program();
  EXPECT_EQ(ladder_from_json(to_json(p)), p);
  EXPECT_EQ(load_ladder(to_json(p).dump()), p);
}

TEST(LadderJson, ShapeErrors) {
  EXPECT_THROW(load_ladder("{"), FormatError);
  EXPECT_THROW(load_ladder(R"({"name":"x","tags":[],"timers":[],"rungs":[],"extra":1})"), FormatError);
  EXPECT_THROW(load_ladder(R"({"name":"x","tags":[{"name":"a","address":"a","kind":"bogus"}],"timers":[],"rungs":[]})"),
               FormatError);
}

namespace {

LadderProgram tiny() {
  LadderProgram p;
  p.name = "T";
  p.tags = {{"In", "I0", TagKind::LocalInput, ""}, {"Out", "O0", TagKind::LocalOutput, ""},
            {"Mem", "M0", TagKind::Internal, ""}};
  p.timers = {{"T1", 100}};
  p.rungs = {{0, "", Network::xic("In"), {{Output::Kind::Ote, "Out", std::nullopt}}}};
  return p;
}

}  // namespace

TEST(LadderValidate, Errors) {
  EXPECT_NO_THROW(validate(tiny()));

  auto p = tiny();
  p.rungs[0].condition = Network::xic("Nope");
  EXPECT_THROW(validate(p), FormatError);

  p = tiny();
  p.rungs[0].outputs[0].tag = "In";
  EXPECT_THROW(validate(p), FormatError);  // writes an input

  p = tiny();
  p.rungs.push_back(p.rungs[0]);
  EXPECT_THROW(validate(p), FormatError);  // double OTE

  p = tiny();
  p.rungs.push_back({1, "", Network::always(), {{Output::Kind::Otl, "Out", std::nullopt}}});
  EXPECT_THROW(validate(p), FormatError);  // OTE mixed with latch

  p = tiny();
  p.rungs[0].outputs.push_back({Output::Kind::Ton, "T2", std::nullopt});
  EXPECT_THROW(validate(p), FormatError);

  p = tiny();
  p.timers[0].preset_ms = 0;
  EXPECT_THROW(validate(p), FormatError);

  p = tiny();
  p.rungs[0].condition = Network::ons("In");
  EXPECT_THROW(validate(p), FormatError);  // one-shot storage must be internal

  p = tiny();
  p.tags.push_back({"R", "R0", TagKind::RobotInput, "Nonexistent"});
  EXPECT_THROW(validate(p), FormatError);

  p = tiny();
  p.rungs[0].condition = Network::xic("T1.DN");
  EXPECT_NO_THROW(validate(p));
}

TEST(LadderScan, OneShotFiresOnce) {
  auto p = tiny();
  p.rungs[0].condition = Network::series({Network::xic("In"), Network::ons("Mem")});
  TagDatabase t(p);
  t.set("In", true);
  scan_once(p, t, 10);
  EXPECT_TRUE(t.get("Out"));
  scan_once(p, t, 10);
  EXPECT_FALSE(t.get("Out"));
}

TEST(LadderScan, UnknownTagThrows) {
  TagDatabase t(tiny());
  EXPECT_THROW(t.get("Zed"), Error);
  EXPECT_THROW(t.set("Zed", true), Error);
}
