#pragma once

// Shared by the unit tests and the acceptance binary.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sortcell/sim/scenario.hpp"
#include "sortcell/tp/corpus.hpp"

namespace sortcell::testing {

inline Part centered_part(ColorClass c, int id = 1, double y_mm = 0.0, double x_mm = 580.0) {
  Part p;
  p.id = id;
  p.color_class = c;
  p.reflectance = OpticsParams{}.palette.for_color(c);
  p.x_mm = x_mm;
  p.y_mm = y_mm;
  return p;
}

/// Normalized lines: "exec t idx text" per executed statement, then
/// "do t idx value" per DO change.
inline std::vector<std::string> bench_lines(const std::vector<tp::ExecRecord>& recs, const tp::BenchCell& bench,
                                            std::int64_t do_from_us = 0) {
  std::vector<std::string> out;
  for (const auto& r : recs)
    out.push_back("exec " + std::to_string(r.t_us) + " " + std::to_string(r.statement) + " " + r.text);
  for (const auto& d : bench.do_log())
    if (d.t_us >= do_from_us)
      out.push_back("do " + std::to_string(d.t_us) + " " + std::to_string(d.index) + " " + (d.value ? "1" : "0"));
  return out;
}

inline std::vector<std::string> read_golden(const std::string& name) {
  std::ifstream in(std::string(SORTCELL_TEST_DATA) + "/golden/" + name);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

struct BenchRun {
  std::vector<std::string> scan;
  std::vector<std::string> sort;
  tp::BenchCell bench;
};

/// SCANPART then (optionally) SORTPART on one stationary block.
inline BenchRun bench_cycle(ColorClass c, std::optional<bool> di121 = std::nullopt) {
  BenchRun run;
  run.bench.parts = {centered_part(c)};
  auto regs = tp::default_registers(580.0);
  const auto scan = tp::execute(tp::scanpart(), regs, run.bench);
  run.scan = bench_lines(scan, run.bench);
  if (di121) {
    run.bench.io.di_table[121] = *di121;
    const auto sort = tp::execute(tp::sortpart(), regs, run.bench);
    run.sort = bench_lines(sort, run.bench);
  }
  return run;
}

/// [R,G,B,G,R] one part every 2.5 s, red accepted.
inline sim::Scenario five_part_scenario() {
  sim::Scenario s;
  s.name = "five_parts_select_red";
  s.seed = 1;
  s.duration_s = 120.0;
  s.selected = {true, false, false};
  const ColorClass seq[] = {ColorClass::Red, ColorClass::Green, ColorClass::Blue, ColorClass::Green, ColorClass::Red};
  for (int i = 0; i < 5; ++i) s.parts.push_back({0.5 + 2.5 * i, seq[i], 0.0, 0.0});
  return s;
}

/// One blue block off-center, green accepted.
inline sim::Scenario edge_blue_scenario(bool override_on) {
  sim::Scenario s;
  s.name = override_on ? "edge_blue_override" : "edge_blue";
  s.duration_s = 60.0;
  s.selected = {false, true, false};
  s.override_enabled = override_on;
  s.parts.push_back({0.5, ColorClass::Blue, 80.0, 0.0});
  return s;
}

}  // namespace sortcell::testing
