#include <benchmark/benchmark.h>

#include <vector>

#include "sortcell/optics.hpp"
#include "sortcell/plc/ladder.hpp"
#include "sortcell/sim/engine.hpp"
#include "sortcell/tp/corpus.hpp"
#include "sortcell/vision.hpp"

using namespace sortcell;

namespace {

Part block(ColorClass c) {
  Part p;
  p.id = 1;
  p.color_class = c;
  p.reflectance = OpticsParams{}.palette.for_color(c);
  p.x_mm = 580.0;
  return p;
}

sim::Scenario five_parts() {
  sim::Scenario s;
  s.name = "bench";
  s.seed = 1;
  s.duration_s = 120.0;
  s.selected = {true, false, false};
  const ColorClass seq[] = {ColorClass::Red, ColorClass::Green, ColorClass::Blue, ColorClass::Green, ColorClass::Red};
  for (int i = 0; i < 5; ++i) s.parts.push_back({0.5 + 2.5 * i, seq[i], 0.0, 0.0});
  return s;
}

void BM_PixelIntensity(benchmark::State& state) {
  const OpticsParams p;
  const auto f = make_filter(FilterName::GreenFilter, p);
  const auto l = led_light({0, 255, 0}, p);
  const auto r = p.palette.for_color(ColorClass::Green);
  for (auto _ : state) benchmark::DoNotOptimize(pixel_intensity(r, f, l));
}
BENCHMARK(BM_PixelIntensity);

void BM_RenderAndFind(benchmark::State& state) {
  const OpticsParams p;
  const CameraConfig cam;
  const std::vector<Part> parts{block(ColorClass::Green)};
  VisionProcess proc;
  proc.name = "GRNSCAN";
  for (auto _ : state) {
    const auto img = render(parts, FilterPosition{make_filter(FilterName::GreenFilter, p), true},
                            led_light({0, 255, 0}, p), cam, p);
    benchmark::DoNotOptimize(run_find(proc, img, cam));
  }
}
BENCHMARK(BM_RenderAndFind)->Unit(benchmark::kMicrosecond);

void BM_LadderScan(benchmark::State& state) {
  const auto& prog = plc::default_program();
  plc::TagDatabase tags(prog);
  tags.set("HMI_Start", true);
  for (auto _ : state) {
    plc::scan_once(prog, tags, 10);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_LadderScan);

void BM_ScanCycleBench(benchmark::State& state) {
  for (auto _ : state) {
    tp::BenchCell b;
    b.parts = {block(ColorClass::Blue)};
    benchmark::DoNotOptimize(tp::scan_cycle_sequence(b));
  }
}
BENCHMARK(BM_ScanCycleBench)->Unit(benchmark::kMicrosecond);

void BM_FivePartRun(benchmark::State& state) {
  const auto s = five_parts();
  for (auto _ : state) {
    sim::Engine e(s);
    e.run();
    benchmark::DoNotOptimize(e.trace().size());
  }
}
BENCHMARK(BM_FivePartRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
