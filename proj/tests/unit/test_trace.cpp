#include <gtest/gtest.h>

#include <sstream>

#include "sortcell/errors.hpp"
#include "sortcell/io/scenario_json.hpp"
#include "sortcell/io/trace.hpp"
#include "support/fixtures.hpp"
#include "support/trace_checks.hpp"

using namespace sortcell;
using namespace sortcell::testing;

namespace {

io::TraceFile run_trace(sim::Scenario s) {
  sim::Engine e(std::move(s));
  e.run();
  return io::make_trace(e);
}

std::string to_text(const io::TraceFile& t) {
  std::ostringstream os;
  io::write_trace(os, t);
  return os.str();
}

io::TraceFile from_text(const std::string& s) {
  std::istringstream is(s);
  return io::read_trace(is);
}

}  // namespace

TEST(Trace, HeaderAndFooter) {
  const auto t = run_trace(five_part_scenario());
  EXPECT_EQ(t.header.format, "sortcell-trace");
  EXPECT_EQ(t.header.version, 1);
  EXPECT_EQ(t.header.scenario_name, "five_parts_select_red");
  EXPECT_EQ(t.header.scenario_hash, io::scenario_hash(five_part_scenario()));
  EXPECT_EQ(t.header.seed, 1u);
  EXPECT_EQ(t.footer.events, t.events.size());
  EXPECT_EQ(t.footer.trace_hash, io::trace_hash(t.events));
  EXPECT_EQ(t.footer.metrics["parts_removed"], 3);
}

TEST(Trace, HashIsSha256OfEventLines) {
  const auto t = run_trace(five_part_scenario());
  std::string all;
  for (const auto& e : t.events) all += io::event_line(e) + "\n";
  EXPECT_EQ(t.footer.trace_hash, io::sha256_hex(all));
}

TEST(Trace, WriteReadRoundTrip) {
  const auto t = run_trace(five_part_scenario());
  const auto text = to_text(t);
  const auto back = from_text(text);
  EXPECT_EQ(back, t);
  EXPECT_EQ(to_text(back), text);
  // One JSON record per line: header, events, footer.
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), t.events.size() + 2);
}

TEST(Trace, ReaderRejectsDamage) {
  const auto text = to_text(run_trace(five_part_scenario()));
  EXPECT_THROW(from_text(""), FormatError);
  EXPECT_THROW(from_text(text.substr(0, text.rfind("{\"type\":\"footer\""))), FormatError);
  EXPECT_THROW(from_text(text.substr(text.find('\n') + 1)), FormatError);

  auto tampered = text;
  const auto pos = tampered.find("\"t_us\":");
  tampered.replace(pos, 8, "\"t_us\":9");
  EXPECT_THROW(from_text(tampered), FormatError);

  auto broken = text;
  broken.insert(text.find('\n') + 1, "{not json\n");
  EXPECT_THROW(from_text(broken), FormatError);
}

TEST(Trace, CompareSelfAndRerun) {
  const auto a = run_trace(five_part_scenario());
  const auto b = run_trace(five_part_scenario());
  EXPECT_TRUE(io::compare_traces(a, a).equal);
  EXPECT_TRUE(io::compare_traces(a, b).equal);
}

TEST(Trace, CompareFindsFirstDivergence) {
  auto a = run_trace(five_part_scenario());
  auto b = a;
  b.events[7].data["injected"] = true;
  const auto d = io::compare_traces(a, b);
  EXPECT_FALSE(d.equal);
  EXPECT_EQ(d.index, 7u);
  ASSERT_TRUE(d.a && d.b);
  EXPECT_EQ(d.a->seq, d.b->seq);

  b = a;
  b.events.pop_back();
  const auto shorter = io::compare_traces(a, b);
  EXPECT_FALSE(shorter.equal);
  EXPECT_EQ(shorter.index, b.events.size());
  EXPECT_FALSE(shorter.b.has_value());
}

TEST(Trace, CompareHeaderChecks) {
  const auto a = run_trace(five_part_scenario());
  auto other_seed = a;
  other_seed.header.seed = 2;
  EXPECT_THROW(io::compare_traces(a, other_seed), HeaderMismatch);
  EXPECT_TRUE(io::compare_traces(a, other_seed, true).equal);

  auto s = five_part_scenario();
  s.parts[0].y_mm = 5.0;
  EXPECT_THROW(io::compare_traces(a, run_trace(s), true), HeaderMismatch);
}

TEST(TraceChecks, BusLatencyWithinOnePeriod) {
  const auto t = run_trace(five_part_scenario());
  const auto r = bus_latency(t.events, 10'000);
  EXPECT_GT(r.checked, 0);
  EXPECT_EQ(r.late, 0);
  EXPECT_LE(r.worst_us, 10'000);
}

TEST(TraceChecks, ExtraBusLatencyShowsUp) {
  auto s = five_part_scenario();
  s.params.bus.extra_latency_ticks = 2;
  const auto t = run_trace(s);
  const auto r = bus_latency(t.events, 10'000);
  EXPECT_GT(r.late, 0);
  EXPECT_GT(r.worst_us, 20'000);
}
