#include "sortcell/io/scenario_json.hpp"

#include <openssl/evp.h>

#include <set>

#include "sortcell/errors.hpp"

namespace sortcell::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Xyz {
  Pose* p;
};

ordered_json encode(double v) { return v; }
ordered_json encode(int v) { return v; }
ordered_json encode(std::int64_t v) { return v; }
ordered_json encode(std::uint64_t v) { return v; }
ordered_json encode(bool v) { return v; }
ordered_json encode(const std::string& v) { return v; }
ordered_json encode(const Rgb& c) { return {c.r, c.g, c.b}; }
ordered_json encode(const Xyz& x) { return {x.p->x, x.p->y, x.p->z}; }
ordered_json encode(ColorClass c) { return std::string(to_string(c)); }

[[noreturn]] void bad(const std::string& where, const char* expected) {
  throw FormatError(where + ": expected " + expected);
}

void decode(const json& j, double& v, const std::string& w) {
  if (!j.is_number()) bad(w, "a number");
  v = j.get<double>();
}
void decode(const json& j, int& v, const std::string& w) {
  if (!j.is_number_integer()) bad(w, "an integer");
  v = j.get<int>();
}
void decode(const json& j, std::int64_t& v, const std::string& w) {
  if (!j.is_number_integer()) bad(w, "an integer");
  v = j.get<std::int64_t>();
}
void decode(const json& j, std::uint64_t& v, const std::string& w) {
  if (!j.is_number_unsigned()) bad(w, "a non-negative integer");
  v = j.get<std::uint64_t>();
}
void decode(const json& j, bool& v, const std::string& w) {
  if (!j.is_boolean()) bad(w, "true or false");
  v = j.get<bool>();
}
void decode(const json& j, std::string& v, const std::string& w) {
  if (!j.is_string()) bad(w, "a string");
  v = j.get<std::string>();
}
void decode(const json& j, Rgb& c, const std::string& w) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number())
    bad(w, "[r, g, b]");
  c = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}
void decode(const json& j, Xyz& x, const std::string& w) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number())
    bad(w, "[x, y, z]");
  x.p->x = j[0].get<double>();
  x.p->y = j[1].get<double>();
  x.p->z = j[2].get<double>();
}
void decode(const json& j, ColorClass& c, const std::string& w) {
  if (!j.is_string()) bad(w, "a color name");
  const auto parsed = parse_color_class(j.get<std::string>());
  if (!parsed || *parsed == ColorClass::Unknown) bad(w, "\"red\", \"green\" or \"blue\"");
  c = *parsed;
}

class Writer {
 public:
  explicit Writer(ordered_json& out) : out_(out) {}
  template <class T>
  void operator()(const char* key, T& v) {
    out_[key] = encode(v);
  }
  template <class T>
  void operator()(const char* key, T&& v) {
    out_[key] = encode(v);
  }
  template <class F>
  void section(const char* key, F&& fn) {
    ordered_json sub = ordered_json::object();
    Writer w(sub);
    fn(w);
    out_[key] = std::move(sub);
  }

 private:
  ordered_json& out_;
};

class Reader {
 public:
  Reader(const json& in, std::string where) : in_(in), where_(std::move(where)) {
    if (!in_.is_object()) bad(where_.empty() ? "scenario" : where_, "an object");
  }
  template <class T>
  void operator()(const char* key, T& v) {
    seen_.insert(key);
    if (in_.contains(key)) decode(in_.at(key), v, path(key));
  }
  template <class T>
  void operator()(const char* key, T&& v) {
    seen_.insert(key);
    if (in_.contains(key)) decode(in_.at(key), v, path(key));
  }
  template <class F>
  void section(const char* key, F&& fn) {
    seen_.insert(key);
    if (!in_.contains(key)) return;
    Reader r(in_.at(key), path(key));
    fn(r);
    r.finish();
  }
  void mark(const char* key) { seen_.insert(key); }
  void finish() const {
    for (const auto& [k, v] : in_.items())
      if (!seen_.contains(k)) throw FormatError("unknown key '" + path(k) + "'");
  }

 private:
  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  const json& in_;
  std::string where_;
  std::set<std::string> seen_;
};

template <class V>
void visit_params(sim::ScenarioParams& p, V& v) {
  v("part_size_mm", p.part_size_mm);
  v.section("conveyor", [&](auto& s) {
    s("speed_mm_per_s", p.conveyor.speed_mm_per_s);
    s("belt_length_mm", p.conveyor.belt_length_mm);
    s("belt_half_width_mm", p.conveyor.belt_half_width_mm);
    s("beam_sensor_x_mm", p.conveyor.beam_sensor_x_mm);
    s("camera_window_x_mm", p.conveyor.camera_window_x_mm);
  });
  v.section("optics", [&](auto& s) {
    s.section("palette", [&](auto& q) {
      q("red", p.optics.palette.red);
      q("green", p.optics.palette.green);
      q("blue", p.optics.palette.blue);
      q("belt", p.optics.palette.belt);
    });
    s("red_filter", p.optics.red_filter);
    s("green_filter", p.optics.green_filter);
    s("blue_filter", p.optics.blue_filter);
    s("ambient", p.optics.ambient);
    s("led_residual", p.optics.led_residual);
    s("led_gain", p.optics.led_gain);
    s("edge_margin_mm", p.optics.edge_margin_mm);
    s("edge_leak_factor", p.optics.edge_leak_factor);
  });
  v.section("camera", [&](auto& s) {
    s("width_px", p.camera.width_px);
    s("height_px", p.camera.height_px);
    s("mm_per_px", p.camera.mm_per_px);
  });
  v.section("vision", [&](auto& s) {
    s("find_threshold_delta", p.vision.find_threshold_delta);
    s("segmentation_delta", p.vision.segmentation_delta);
    s("min_area_px", p.vision.min_area_px);
    s("max_area_px", p.vision.max_area_px);
  });
  v.section("arduino", [&](auto& s) {
    s("n_leds", p.arduino.n_leds);
    s("led_pin", p.arduino.led_pin);
    s("servo_pin", p.arduino.servo_pin);
    s("servo_min_us", p.arduino.servo_min_us);
    s("servo_max_us", p.arduino.servo_max_us);
    s("input1_pin", p.arduino.input1_pin);
    s("input2_pin", p.arduino.input2_pin);
    s("servo_travel_deg_per_s", p.arduino.servo_travel_deg_per_s);
  });
  v.section("bus", [&](auto& s) {
    s("rpi_us", p.bus.rpi_us);
    s("extra_latency_ticks", p.bus.extra_latency_ticks);
  });
  v.section("plc", [&](auto& s) {
    s("scan_ms", p.plc.scan_ms);
    s("t1_preset_ms", p.plc.t1_preset_ms);
  });
  v.section("robot", [&](auto& s) {
    s("joint_move_s", p.robot.timing.joint_move_s);
    s("vision_processing_s", p.robot.timing.vision_processing_s);
    s("pick_tolerance_mm", p.robot.pick_tolerance_mm);
    s("initial_fault", p.robot.initial_fault);
  });
  v.section("sim", [&](auto& s) {
    s("physics_tick_us", p.sim.physics_tick_us);
    s("deadlock_timeout_s", p.sim.deadlock_timeout_s);
  });
  v.section("workspace", [&](auto& s) {
    s("min", Xyz{&p.workspace.min});
    s("max", Xyz{&p.workspace.max});
  });
}

template <class V>
void visit_spawner(sim::SpawnerSpec& sp, V& v) {
  v("count", sp.count);
  v("start_s", sp.start_s);
  v("extra_interval_mean_s", sp.extra_interval_mean_s);
  v("red_weight", sp.red_weight);
  v("green_weight", sp.green_weight);
  v("blue_weight", sp.blue_weight);
  v("y_max_mm", sp.y_max_mm);
  v("rz_max_deg", sp.rz_max_deg);
}

template <class V>
void visit_network(NetworkConfig& n, V& v) {
  v("robot_ip", n.robot_ip);
  v("plc_ip", n.plc_ip);
  v("pc_ip", n.pc_ip);
  v("vision_ip", n.vision_ip);
  v("subnet_mask", n.subnet_mask);
  v("word_length", n.word_length);
}

}  // namespace

ordered_json to_json(const sim::Scenario& in) {
  sim::Scenario s = in;
  ordered_json out;
  Writer w(out);
  w("schema_version", sim::kScenarioSchemaVersion);
  w("name", s.name);
  w("seed", s.seed);
  w("duration_s", s.duration_s);
  w.section("selected", [&](auto& q) {
    q("red", s.selected.red);
    q("green", s.selected.green);
    q("blue", s.selected.blue);
  });
  w("override_enabled", s.override_enabled);
  w("auto_start", s.auto_start);
  ordered_json parts = ordered_json::array();
  for (auto& p : s.parts) parts.push_back({{"t", p.t_s}, {"color", encode(p.color)}, {"y_mm", p.y_mm}, {"rz_deg", p.rz_deg}});
  out["parts"] = std::move(parts);
  if (s.spawner) w.section("spawner", [&](auto& q) { visit_spawner(*s.spawner, q); });
  ordered_json script = ordered_json::array();
  for (auto& a : s.script) script.push_back({{"t", a.t_s}, {"tag", a.tag}, {"value", a.value}});
  out["script"] = std::move(script);
  w.section("params", [&](auto& q) { visit_params(s.params, q); });
  w.section("network", [&](auto& q) { visit_network(s.network, q); });
  return out;
}

sim::Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("scenario must be a JSON object");
  if (!j.contains("schema_version")) throw FormatError("scenario is missing 'schema_version'");
  if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != sim::kScenarioSchemaVersion)
    throw FormatError("unsupported schema_version (expected " + std::to_string(sim::kScenarioSchemaVersion) + ")");

  sim::Scenario s;
  Reader r(j, "");
  int version = 0;
  r("schema_version", version);
  r("name", s.name);
  r("seed", s.seed);
  r("duration_s", s.duration_s);
  r.section("selected", [&](auto& q) {
    q("red", s.selected.red);
    q("green", s.selected.green);
    q("blue", s.selected.blue);
  });
  r("override_enabled", s.override_enabled);
  r("auto_start", s.auto_start);

  r.mark("parts");
  if (j.contains("parts")) {
    const auto& arr = j.at("parts");
    if (!arr.is_array()) bad("parts", "an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      sim::PartSpec p;
      Reader pr(arr[i], "parts[" + std::to_string(i) + "]");
      pr("t", p.t_s);
      pr("color", p.color);
      pr("y_mm", p.y_mm);
      pr("rz_deg", p.rz_deg);
      pr.finish();
      if (!arr[i].contains("t") || !arr[i].contains("color"))
        throw FormatError("parts[" + std::to_string(i) + "] needs 't' and 'color'");
      s.parts.push_back(p);
    }
  }
  if (j.contains("spawner") && !j.at("spawner").is_null()) s.spawner = sim::SpawnerSpec{};
  r.section("spawner", [&](auto& q) {
    if (s.spawner) visit_spawner(*s.spawner, q);
  });
  r.mark("script");
  if (j.contains("script")) {
    const auto& arr = j.at("script");
    if (!arr.is_array()) bad("script", "an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      sim::OperatorAction a;
      Reader ar(arr[i], "script[" + std::to_string(i) + "]");
      ar("t", a.t_s);
      ar("tag", a.tag);
      ar("value", a.value);
      ar.finish();
      if (!arr[i].contains("t") || !arr[i].contains("tag") || !arr[i].contains("value"))
        throw FormatError("script[" + std::to_string(i) + "] needs 't', 'tag' and 'value'");
      s.script.push_back(a);
    }
  }
  r.section("params", [&](auto& q) { visit_params(s.params, q); });
  r.section("network", [&](auto& q) { visit_network(s.network, q); });
  r.finish();
  if (s.network.word_length != static_cast<int>(kAssemblyWords))
    throw FormatError("network.word_length must be " + std::to_string(kAssemblyWords));
  s.params.camera.center_x_mm = s.params.conveyor.camera_window_x_mm;
  return s;
}

sim::Scenario parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

std::string dump_scenario(const sim::Scenario& s) { return to_json(s).dump(2) + "\n"; }

std::string scenario_hash(const sim::Scenario& s) {
  ordered_json j = to_json(s);
  j.erase("seed");
  return sha256_hex(j.dump());
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

}  // namespace sortcell::io
