#include <gtest/gtest.h>

#include "sortcell/plc/verdict.hpp"
#include "support/ladder_probe.hpp"

using namespace sortcell;
using namespace sortcell::plc;
using namespace sortcell::testing;

namespace {
constexpr ColorFlags R{true, false, false}, G{false, true, false}, B{false, false, true}, GB{false, true, true},
    None{};
}

TEST(Verdict, Examples) {
  EXPECT_EQ(verdict(R, R, false), (Verdict{true, false}));
  EXPECT_EQ(verdict(G, R, false), (Verdict{false, true}));
  EXPECT_EQ(verdict(B, {false, true, true}, false), (Verdict{true, false}));
  EXPECT_EQ(verdict(None, {true, true, true}, false), (Verdict{false, true}));
}

TEST(Verdict, EdgeLeakWithoutOverrideKeptWhenGreenSelected) {
  EXPECT_EQ(verdict(GB, G, false), (Verdict{true, false}));
}

TEST(Verdict, OverrideTreatsGreenBlueAsBlue) {
  EXPECT_EQ(verdict(GB, G, true), (Verdict{false, true}));
  EXPECT_EQ(verdict(GB, B, true), (Verdict{true, false}));
  // Plain green is unaffected.
  EXPECT_EQ(verdict(G, G, true), (Verdict{true, false}));
}

TEST(VerdictProperty, ExactlyOneOutcomeAndMatchesRule) {
  for (int d = 0; d < 8; ++d)
    for (int s = 0; s < 8; ++s)
      for (bool ov : {false, true}) {
        const auto v = verdict(flags_from_bits(d), flags_from_bits(s), ov);
        ASSERT_NE(v.part_match, v.remove);
        ASSERT_EQ(v.part_match, brute_force_keep(flags_from_bits(d), flags_from_bits(s), ov));
      }
}

TEST(VerdictProperty, NothingSelectedRemovesEverything) {
  for (int d = 0; d < 8; ++d)
    for (bool ov : {false, true}) EXPECT_TRUE(verdict(flags_from_bits(d), None, ov).remove);
}

TEST(VerdictProperty, MonotoneInSelection) {
  // Selecting more colors never turns a keep into a remove.
  for (int d = 0; d < 8; ++d)
    for (int s = 0; s < 8; ++s)
      for (int extra = 0; extra < 8; ++extra)
        for (bool ov : {false, true})
          if (verdict(flags_from_bits(d), flags_from_bits(s), ov).part_match)
            ASSERT_TRUE(verdict(flags_from_bits(d), flags_from_bits(s | extra), ov).part_match);
}
