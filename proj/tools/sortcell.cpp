#include <csignal>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sortcell/arduino.hpp"
#include "sortcell/errors.hpp"
#include "sortcell/io/scenario_json.hpp"
#include "sortcell/io/service.hpp"
#include "sortcell/io/trace.hpp"
#include "sortcell/optics.hpp"
#include "sortcell/plc/ladder.hpp"
#include "sortcell/sim/engine.hpp"
#include "sortcell/tp/corpus.hpp"
#include "sortcell/tp/program.hpp"

namespace {

using namespace sortcell;

enum Exit : int {
  kOk = 0,
  kIo = 1,
  kUsage = 2,
  kParse = 3,
  kValidation = 4,
  kDeadlock = 5,
  kRuntimeFault = 6,
  kHeaderMismatch = 7,
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
void with_output(const std::string& path, F&& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write '" + path + "'");
  write(out);
  if (!out) throw IoFailure("error writing '" + path + "'");
}

sim::Scenario load_scenario(const std::string& path) { return io::parse_scenario(read_file(path)); }

// ---- run

struct RunArgs {
  std::string scenario;
  std::string out = "-";
  std::string metrics;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  bool quiet = false;
};

int cmd_run(const RunArgs& a) {
  sim::Scenario s = load_scenario(a.scenario);
  if (a.seed) s.seed = *a.seed;
  if (a.duration) s.duration_s = *a.duration;
  sim::Engine engine(std::move(s));

  std::string status = "completed";
  int code = kOk;
  std::string diag;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    engine.run();
  } catch (const DeadlockDetected& e) {
    status = "deadlock";
    code = kDeadlock;
    diag = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto m = engine.metrics();
  if (code == kOk && m.runtime_faults > 0) {
    status = "runtime_fault";
    code = kRuntimeFault;
    for (const auto& e : engine.trace())
      if (e.kind == sim::kind::RobotFault) {
        diag = e.data.dump();
        break;
      }
  }
  const auto trace = io::make_trace(engine, status);
  with_output(a.out, [&](std::ostream& o) { io::write_trace(o, trace); });
  if (!a.metrics.empty())
    with_output(a.metrics, [&](std::ostream& o) { o << sim::to_json(m).dump(2) << '\n'; });

  if (!a.quiet) {
    std::cerr << "sortcell: " << status << " at t=" << static_cast<double>(m.sim_time_us) / 1e6 << " s ("
              << wall << " s wall), " << trace.events.size() << " events\n"
              << "  spawned " << m.parts_spawned << ", kept " << m.parts_kept << ", removed " << m.parts_removed
              << ", misclassified " << m.misclassified << "\n"
              << "  reject bin " << nlohmann::json(m.reject_bin).dump() << "\n"
              << "  trace hash " << trace.footer.trace_hash << "\n";
  }
  if (!diag.empty()) std::cerr << "sortcell: " << diag << "\n";
  return code;
}

// ---- compare

int cmd_compare(const std::string& pa, const std::string& pb, bool ignore_seed) {
  std::ifstream fa(pa), fb(pb);
  if (!fa) throw IoFailure("cannot read '" + pa + "'");
  if (!fb) throw IoFailure("cannot read '" + pb + "'");
  const auto a = io::read_trace(fa);
  const auto b = io::read_trace(fb);
  const auto d = io::compare_traces(a, b, ignore_seed);
  if (d.equal) {
    std::cout << "identical (" << a.events.size() << " events)\n";
    return kOk;
  }
  auto show = [](const char* tag, const std::optional<sim::TraceEvent>& e) {
    std::cout << tag << (e ? io::event_line(*e) : std::string("<end of trace>")) << "\n";
  };
  std::cout << "first divergence at record " << d.index;
  if (d.a || d.b) {
    const auto& e = d.a ? *d.a : *d.b;
    std::cout << " (t_us " << e.t_us << ", seq " << e.seq << ")";
  }
  std::cout << "\n";
  show("  a: ", d.a);
  show("  b: ", d.b);
  return 1;
}

// ---- serve

volatile std::sig_atomic_t g_interrupted = 0;

int cmd_serve(const std::string& path, io::ServiceOptions opts) {
  sim::Scenario s = load_scenario(path);
  sim::validate(s);
  io::Service service(std::move(s), opts);
  const int port = service.start();
  std::cerr << "sortcell: serving on http://" << opts.host << ":" << port
            << "  (GET /api/snapshot, POST /api/command, GET /api/stream, GET /api/schema)\n";
  std::signal(SIGINT, [](int) { g_interrupted = 1; });
  std::signal(SIGTERM, [](int) { g_interrupted = 1; });
  while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  service.stop();
  return kOk;
}

// ---- render

struct RenderArgs {
  std::string color = "red";
  std::string filter = "none";
  std::string light = "ambient";
  std::vector<int> led{255, 0, 0};
  double y_mm = 0.0;
  double rz_deg = 0.0;
  std::string out = "-";
};

int cmd_render(const RenderArgs& a) {
  const OpticsParams optics;
  CameraConfig camera;
  const auto color = parse_color_class(a.color);
  if (!color || *color == ColorClass::Unknown) throw CLI::ValidationError("--color", "expected red, green or blue");
  Part p;
  p.id = 1;
  p.color_class = *color;
  p.reflectance = optics.palette.for_color(*color);
  p.x_mm = camera.center_x_mm;
  p.y_mm = a.y_mm;
  p.rotation_deg = a.rz_deg;
  FilterName f = FilterName::NoFilter;
  if (a.filter == "red") f = FilterName::RedFilter;
  else if (a.filter == "green") f = FilterName::GreenFilter;
  else if (a.filter == "blue") f = FilterName::BlueFilter;
  const LightSpec light =
      a.light == "led" ? led_light(Led8{static_cast<std::uint8_t>(a.led[0]), static_cast<std::uint8_t>(a.led[1]),
                                        static_cast<std::uint8_t>(a.led[2])},
                                   optics)
                       : ambient_light(optics);
  const std::vector<Part> parts{p};
  const auto img = render(parts, FilterPosition{make_filter(f, optics), true}, light, camera, optics);
  with_output(a.out, [&](std::ostream& o) { write_pgm(o, img); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for a vision-guided color sorting cell"};
  app.set_version_flag("--version", std::string(SORTCELL_VERSION));
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario in batch mode and write its trace");
  run_cmd->add_option("scenario", run.scenario, "Scenario JSON file")->required();
  run_cmd->add_option("-o,--out", run.out, "Trace output path ('-' for stdout)");
  run_cmd->add_option("--metrics", run.metrics, "Also write metrics JSON here");
  run_cmd->add_option("--seed", run.seed, "Override the scenario seed");
  run_cmd->add_option("--duration", run.duration, "Override the run duration (s)")->check(CLI::PositiveNumber);
  run_cmd->add_flag("-q,--quiet", run.quiet, "No summary on stderr");

  std::string trace_a, trace_b;
  bool ignore_seed = false;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare two traces; exit 0 identical, 1 different, 7 header mismatch");
  cmp_cmd->add_option("a", trace_a)->required();
  cmp_cmd->add_option("b", trace_b)->required();
  cmp_cmd->add_flag("--ignore-seed", ignore_seed, "Compare traces recorded with different seeds");

  std::string serve_path;
  io::ServiceOptions serve;
  bool no_throttle = false;
  auto* serve_cmd = app.add_subcommand("serve", "Run a live session for the HMI");
  serve_cmd->add_option("scenario", serve_path, "Scenario JSON file")->required();
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("-p,--port", serve.port, "0 picks a free port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--speed", serve.speed, "Simulated seconds per wall second")->check(CLI::PositiveNumber);
  serve_cmd->add_option("--stream-hz", serve.stream_hz, "Snapshot stream rate")->check(CLI::PositiveNumber);
  serve_cmd->add_flag("--no-throttle", no_throttle, "Advance simulated time as fast as possible");

  RenderArgs render_args;
  auto* render_cmd = app.add_subcommand("render", "Render one centered block as the camera sees it (PGM)");
  render_cmd->add_option("--color", render_args.color)->check(CLI::IsMember({"red", "green", "blue"}));
  render_cmd->add_option("--filter", render_args.filter)->check(CLI::IsMember({"none", "red", "green", "blue"}));
  render_cmd->add_option("--light", render_args.light)->check(CLI::IsMember({"ambient", "led"}));
  render_cmd->add_option("--led", render_args.led, "LED color r g b")->expected(3)->check(CLI::Range(0, 255));
  render_cmd->add_option("--y", render_args.y_mm, "Lateral offset (mm)");
  render_cmd->add_option("--rz", render_args.rz_deg, "Rotation (deg)");
  render_cmd->add_option("-o,--out", render_args.out);

  auto* ladder_cmd = app.add_subcommand("ladder", "Print the PLC program as JSON");
  std::string tp_name;
  auto* tp_cmd = app.add_subcommand("tp", "Print a teach pendant program (SCANPART, SORTPART or a file)");
  tp_cmd->add_option("program", tp_name)->required();
  std::string scen_path;
  auto* scen_cmd = app.add_subcommand("scenario", "Validate a scenario and print its canonical form and hash");
  scen_cmd->add_option("scenario", scen_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*cmp_cmd) return cmd_compare(trace_a, trace_b, ignore_seed);
    if (*serve_cmd) {
      serve.throttle = !no_throttle;
      return cmd_serve(serve_path, serve);
    }
    if (*render_cmd) return cmd_render(render_args);
    if (*ladder_cmd) {
      std::cout << plc::default_program_json();
      return kOk;
    }
    if (*tp_cmd) {
      const tp::TpProgram prog = tp_name == "SCANPART"   ? tp::scanpart()
                                 : tp_name == "SORTPART" ? tp::sortpart()
                                                         : tp::parse(read_file(tp_name));
      std::cout << tp::print(prog);
      return kOk;
    }
    if (*scen_cmd) {
      const auto s = load_scenario(scen_path);
      sim::validate(s);
      std::cout << io::dump_scenario(s) << "\nscenario_hash " << io::scenario_hash(s) << "\n";
      return kOk;
    }
  } catch (const IoFailure& e) {
    std::cerr << "sortcell: " << e.what() << "\n";
    return kIo;
  } catch (const ScenarioInvalid& e) {
    std::cerr << "sortcell: invalid scenario: " << e.what() << "\n";
    return kValidation;
  } catch (const HeaderMismatch& e) {
    std::cerr << "sortcell: header mismatch: " << e.what() << "\n";
    return kHeaderMismatch;
  } catch (const ParseError& e) {
    std::cerr << "sortcell: " << e.what() << "\n";
    return kParse;
  } catch (const FormatError& e) {
    std::cerr << "sortcell: " << e.what() << "\n";
    return kParse;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "sortcell: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "sortcell: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
