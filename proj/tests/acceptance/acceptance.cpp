// One PASS/FAIL line per primary acceptance criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sortcell/arduino.hpp"
#include "sortcell/errors.hpp"
#include "sortcell/io/trace.hpp"
#include "sortcell/iobus.hpp"
#include "sortcell/optics.hpp"
#include "sortcell/plc/verdict.hpp"
#include "sortcell/sim/engine.hpp"
#include "sortcell/tp/corpus.hpp"
#include "sortcell/vision.hpp"
#include "support/fixtures.hpp"
#include "support/ladder_probe.hpp"
#include "support/trace_checks.hpp"

using namespace sortcell;
using namespace sortcell::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double wall_s(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const OpticsParams kOptics{};

double intensity(ColorClass c, FilterName f, const LightSpec& light) {
  return pixel_intensity(kOptics.palette.for_color(c), make_filter(f, kOptics), light);
}

VisionRegister find_on(ColorClass c, FilterName f, const LightSpec& light, const char* process) {
  CameraConfig cam;
  const std::vector<Part> parts{centered_part(c)};
  const auto img = render(parts, FilterPosition{make_filter(f, kOptics), true}, light, cam, kOptics);
  VisionProcess vp;
  vp.name = process;
  return run_find(vp, img, cam);
}

// ---- 1

Outcome criterion1() {
  Outcome o;
  const auto amb = ambient_light(kOptics);
  const double g = intensity(ColorClass::Green, FilterName::GreenFilter, amb);
  const double b = intensity(ColorClass::Blue, FilterName::GreenFilter, amb);
  o.check(std::abs(g - b) < 0.05, "|I(G,green)-I(B,green)| < 0.05");
  const double r = intensity(ColorClass::Red, FilterName::RedFilter, amb);
  const double others = std::max(intensity(ColorClass::Green, FilterName::RedFilter, amb),
                                 intensity(ColorClass::Blue, FilterName::RedFilter, amb));
  o.check(r - others > 0.25, "red-filter margin > 0.25");
  const bool grn_g = find_on(ColorClass::Green, FilterName::GreenFilter, amb, "GRNSCAN").found;
  const bool grn_b = find_on(ColorClass::Blue, FilterName::GreenFilter, amb, "GRNSCAN").found;
  const bool blu_g = find_on(ColorClass::Green, FilterName::BlueFilter, amb, "BLUSCAN").found;
  const bool blu_b = find_on(ColorClass::Blue, FilterName::BlueFilter, amb, "BLUSCAN").found;
  o.check(grn_g == grn_b, "GRNSCAN cannot separate green from blue under ambient light");
  o.check(blu_g == blu_b, "BLUSCAN cannot separate green from blue under ambient light");
  o.note("green filter G " + fmt("%.4f", g) + " B " + fmt("%.4f", b) + ", red margin " + fmt("%.4f", r - others));
  return o;
}

// ---- 2

Outcome criterion2() {
  Outcome o;
  struct Scan {
    ColorClass target;
    LineLevel a, b;
  };
  const Scan scans[] = {{ColorClass::Red, LineLevel::High, LineLevel::High},
                        {ColorClass::Green, LineLevel::Low, LineLevel::High},
                        {ColorClass::Blue, LineLevel::High, LineLevel::Low}};
  const ColorClass colors[] = {ColorClass::Red, ColorClass::Green, ColorClass::Blue};
  std::string ratios;
  for (const auto& s : scans) {
    const auto out = evaluate(s.a, s.b);
    const auto filter = filter_at_angle(out.angle_deg);
    o.check(filter.has_value(), "wheel angle aligns a filter");
    if (!filter) continue;
    const auto light = led_light(out.led, kOptics);
    const double target = intensity(s.target, *filter, light);
    double worst = 0.0;
    for (auto c : colors)
      if (c != s.target) worst = std::max(worst, intensity(c, *filter, light));
    const double ratio = target / worst;
    o.check(ratio >= 3.0, std::string(to_string(s.target)) + " target/non-target >= 3");
    ratios += std::string(ratios.empty() ? "" : ", ") + std::string(to_string(s.target)) + " " + fmt("%.2f", ratio);
  }
  int errors = 0;
  for (auto c : colors) {
    tp::BenchCell bench;
    bench.parts = {centered_part(c)};
    const ColorFlags f = tp::scan_cycle_sequence(bench);
    errors += (f.red != (c == ColorClass::Red)) + (f.green != (c == ColorClass::Green)) +
              (f.blue != (c == ColorClass::Blue));
  }
  o.check(errors == 0, "3x3 part/scan classification has no errors");
  o.note("ratios " + ratios + "; classification errors " + std::to_string(errors) + "/9");
  return o;
}

// ---- 3

Outcome criterion3() {
  Outcome o;
  struct Row {
    LineLevel a, b;
    int angle;
    Led8 led;
  };
  const Row rows[] = {{LineLevel::High, LineLevel::High, 90, {255, 0, 0}},
                      {LineLevel::Low, LineLevel::High, 180, {0, 255, 0}},
                      {LineLevel::High, LineLevel::Low, 0, {0, 0, 255}},
                      {LineLevel::Low, LineLevel::Low, 180, {0, 255, 0}}};
  for (const auto& r : rows) {
    const auto out = evaluate(r.a, r.b);
    o.check(out.angle_deg == r.angle && out.led == r.led,
            std::string("row (") + std::string(to_string(r.a)) + "," + std::string(to_string(r.b)) + ")");
  }
  o.note("4/4 rows checked, (Low,Low) -> 180 deg green");
  return o;
}

// ---- 4

Outcome criterion4() {
  Outcome o;
  try {
    const auto scan = tp::parse(tp::scanpart_source());
    const auto sort = tp::parse(tp::sortpart_source());
    o.check(scan.name == "SCANPART" && scan.statements.size() == 29, "SCANPART parses to 29 statements");
    o.check(sort.name == "SORTPART" && sort.statements.size() == 29, "SORTPART parses to 29 statements");
    o.check(tp::same_statements(tp::parse(tp::print(scan)), scan), "SCANPART print/parse round trip");
    o.check(tp::same_statements(tp::parse(tp::print(sort)), sort), "SORTPART print/parse round trip");
  } catch (const std::exception& e) {
    o.check(false, std::string("parse: ") + e.what());
    return o;
  }

  const auto red = bench_cycle(ColorClass::Red);
  o.check(red.scan == read_golden("scanpart_red.golden"), "SCANPART golden trace");
  // Waits between successive statements.
  std::vector<double> waits;
  for (const auto& st : tp::scanpart().statements)
    if (const auto* w = std::get_if<tp::Wait>(&st.op)) waits.push_back(w->seconds);
  o.check(waits == std::vector<double>{0.50, 0.50, 0.80}, "SCANPART waits 0.50, 0.50, 0.80 s");

  const auto pass = bench_cycle(ColorClass::Green, true);
  o.check(pass.sort == read_golden("sortpart_pass.golden"), "SORTPART pass-branch golden trace");
  std::int64_t on = -1, off = -1;
  for (const auto& d : pass.bench.do_log()) {
    if (d.index == 126 && d.value) on = d.t_us;
    if (d.index == 126 && !d.value) off = d.t_us;
  }
  o.check(on >= 0 && off - on == 750'000, "CONVEYOR FWD pulse is exactly 0.75 s");

  const auto remove = bench_cycle(ColorClass::Green, false);
  o.check(remove.sort == read_golden("sortpart_remove.golden"), "SORTPART remove-branch golden trace");
  for (const auto* run : {&pass, &remove})
    for (int i : {123, 124, 125, 130}) o.check(!run->bench.io.get_do(i), "DO[" + std::to_string(i) + "] OFF at end");

  // Simulated-time budget.
  auto last_t = [](const std::vector<std::string>& lines) {
    std::int64_t t = 0;
    for (const auto& l : lines) {
      std::istringstream ss(l);
      std::string kind;
      std::int64_t v;
      ss >> kind >> v;
      t = std::max(t, v);
    }
    return t;
  };
  const double scan_s = static_cast<double>(last_t(red.scan)) / 1e6;
  const double pass_s = static_cast<double>(last_t(pass.sort) - last_t(pass.scan)) / 1e6;
  o.note("simulated: SCANPART " + fmt("%.2f s", scan_s) + ", SORTPART pass " + fmt("%.2f s", pass_s));
  o.check(scan_s < 1.0 && pass_s < 1.0, "runtime < 1 s simulated (listing waits alone total 1.80 s)");
  return o;
}

// ---- 5

Outcome criterion5() {
  Outcome o;
  const std::vector<std::string> status{"Prg paused", "Motion held"};
  const std::vector<std::string> cmd{"IMSTP", "SFSPD", "Stop", "Enable"};
  o.check(pack(Direction::RobotToPlc, status)[0] == 48, "pack({Prg paused, Motion held}) == 48");
  o.check(pack(Direction::PlcToRobot, cmd)[0] == 141, "pack({IMSTP, SFSPD, Stop, Enable}) == 141");
  int cases = 0;
  for (auto d : {Direction::RobotToPlc, Direction::PlcToRobot}) {
    const auto table = alias_table(d);
    const std::size_t n = table.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::string> names;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) names.emplace_back(table[i].name);
      const auto w = pack(d, names);
      if (unpack(d, w) != names || !reserved_bits_clear(d, w)) {
        o.check(false, "round trip of subset " + std::to_string(mask));
        return o;
      }
      ++cases;
    }
  }
  o.note("round trip over " + std::to_string(cases) + " bit subsets");
  return o;
}

// ---- 6

struct RunResult {
  sim::Engine engine;
  bool deadlock = false;
};

RunResult run_scenario(sim::Scenario s) {
  RunResult r{sim::Engine(std::move(s))};
  try {
    r.engine.run();
  } catch (const DeadlockDetected&) {
    r.deadlock = true;
  }
  return r;
}

std::vector<std::vector<sim::TraceEvent>> g_end_to_end;

Outcome criterion6() {
  Outcome o;
  const double wall = wall_s([&] {
    int mismatches = 0;
    int ladder_mismatches = 0;
    for (int d = 0; d < 8; ++d)
      for (int s = 0; s < 8; ++s)
        for (bool ov : {false, true}) {
          const auto det = flags_from_bits(d);
          const auto sel = flags_from_bits(s);
          const bool keep = brute_force_keep(det, sel, ov);
          const auto v = plc::verdict(det, sel, ov);
          mismatches += (v.part_match != keep) || (v.remove == keep);
          const auto lv = ladder_verdict(det, sel, ov);
          ladder_mismatches += (lv.part_match != keep) || (lv.remove == keep);
        }
    o.check(mismatches == 0, "verdict() matches brute force on 128 cases");
    o.check(ladder_mismatches == 0, "ladder program matches brute force on 128 cases");
    o.note("128 cases: verdict mismatches " + std::to_string(mismatches) + ", ladder mismatches " +
           std::to_string(ladder_mismatches));

    for (bool ov : {false, true}) {
      auto r = run_scenario(edge_blue_scenario(ov));
      const auto& recs = r.engine.part_records();
      const bool ok = !r.deadlock && recs.size() == 1 && recs.begin()->second.keep.has_value();
      o.check(ok, std::string("edge blue run completes (override ") + (ov ? "on" : "off") + ")");
      if (!ok) continue;
      const auto& rec = recs.begin()->second;
      const bool expect_keep = !ov;
      o.check(*rec.keep == expect_keep,
              std::string("edge blue ") + (expect_keep ? "kept" : "removed") + " with override " + (ov ? "on" : "off"));
      o.check(rec.state == (expect_keep ? PartState::PassedThrough : PartState::InRejectBin), "edge blue final state");
      o.note(std::string("override ") + (ov ? "on" : "off") + ": detected G=" + (rec.detected.green ? "1" : "0") +
             " B=" + (rec.detected.blue ? "1" : "0") + " -> " + (*rec.keep ? "kept" : "removed"));
      g_end_to_end.push_back(r.engine.trace());
    }
  });
  o.check(wall < 1.0, "runtime < 1 s");
  o.note("wall " + fmt("%.3f s", wall));
  return o;
}

// ---- 7

Outcome criterion7() {
  Outcome o;
  std::string hash1, hash2;
  double wall = 0.0;
  double sim_s = 0.0;
  double min_latency = 1e9;
  {
    std::optional<RunResult> r;
    wall = wall_s([&] { r.emplace(run_scenario(five_part_scenario())); });
    auto& e = r->engine;
    o.check(!r->deadlock, "no deadlock");
    std::vector<ColorClass> bin;
    for (int id : e.reject_bin().contents) bin.push_back(e.part_records().at(id).color);
    o.check(bin == std::vector<ColorClass>{ColorClass::Green, ColorClass::Blue, ColorClass::Green},
            "reject bin holds [G,B,G] in order");
    int reds_passed = 0;
    for (const auto& [id, rec] : e.part_records()) {
      if (rec.color == ColorClass::Red && rec.state == PartState::PassedThrough) ++reds_passed;
      if (rec.verdict_us && rec.beam_us)
        min_latency = std::min(min_latency, static_cast<double>(*rec.verdict_us - *rec.beam_us) / 1e6);
      else
        o.check(false, "part " + std::to_string(id) + " got a verdict");
    }
    o.check(reds_passed == 2, "two reds pass through");
    o.check(min_latency >= 2.0, "per-part verdict latency >= 2.00 s");
    hash1 = io::make_trace(e).footer.trace_hash;
    sim_s = static_cast<double>(e.now_us()) / 1e6;
    g_end_to_end.push_back(e.trace());
  }
  {
    auto r = run_scenario(five_part_scenario());
    hash2 = io::make_trace(r.engine).footer.trace_hash;
  }
  o.check(hash1 == hash2, "re-run trace hash identical");
  o.check(wall < 1.0, "runtime < 1 s wall");
  o.check(sim_s < 5.0, "runtime < 5 s simulated (5 serial parts at >= 2.00 s verdict latency need >= 10 s)");
  o.note("bin [G,B,G], min latency " + fmt("%.2f s", min_latency) + ", simulated " + fmt("%.2f s", sim_s) +
         ", wall " + fmt("%.3f s", wall) + ", hash " + hash1.substr(0, 16));
  return o;
}

// ---- 8

Outcome criterion8() {
  Outcome o;
  sim::Scenario stochastic;
  stochastic.name = "stochastic";
  stochastic.seed = 20240611;
  stochastic.duration_s = 400.0;
  stochastic.selected = {false, true, true};
  stochastic.spawner = sim::SpawnerSpec{8, 0.5, 1.5, 1.0, 1.0, 1.0, 30.0, 45.0};
  g_end_to_end.push_back(run_scenario(stochastic).engine.trace());

  int checked = 0;
  std::int64_t worst = 0;
  for (const auto& trace : g_end_to_end) {
    const auto rep = bus_latency(trace, 10'000);
    checked += rep.checked;
    worst = std::max(worst, rep.worst_us);
    o.check(rep.late == 0, "late delivery: " + rep.first_violation);
  }
  o.check(checked > 0, "trace contains assembly-wired DO changes");
  o.note(std::to_string(g_end_to_end.size()) + " traces, " + std::to_string(checked) + " DO changes, worst " +
         std::to_string(worst) + " us");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int n;
    const char* title;
    Outcome (*fn)();
  };
  const Criterion all[] = {
      {1, "filter-only intensities cannot separate green and blue", criterion1},
      {2, "filter plus LED separates all colors", criterion2},
      {3, "microcontroller truth table", criterion3},
      {4, "robot program corpus", criterion4},
      {5, "assembly word encoding", criterion5},
      {6, "verdict truth table and edge override", criterion6},
      {7, "end-to-end sorting and determinism", criterion7},
      {8, "bus latency bound", criterion8},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("%s criterion %d: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.n, c.title, detail.c_str());
    failed += !o.pass;
  }
  return failed;
}
