#include "sortcell/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "sortcell/errors.hpp"
#include "sortcell/plc/ladder.hpp"

namespace sortcell::sim {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ScenarioInvalid(what); }

void require(bool ok, const std::string& what) {
  if (!ok) invalid(what);
}

bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

// Half diagonal: the widest lateral extent of a rotated square.
double lateral_reach(double y, double size) { return std::abs(y) + size * std::sqrt(0.5); }

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint32_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32), id};
    gen_.seed(seq);
  }
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

void check_rgb(const Rgb& c, const std::string& what) {
  require(in_unit_range(c), what + " must have every channel in [0,1]");
}

}  // namespace

double min_part_spacing_mm(const ScenarioParams& p) noexcept { return p.camera.half_fov_x_mm() + p.part_size_mm; }

double min_spawn_interval_s(const ScenarioParams& p) noexcept {
  return min_part_spacing_mm(p) / p.conveyor.speed_mm_per_s;
}

void validate(const Scenario& s) {
  const auto& p = s.params;
  require(std::isfinite(s.duration_s) && s.duration_s > 0.0 && s.duration_s <= 1e6,
          "duration_s must be in (0, 1e6]");

  require(finite_pos(p.part_size_mm), "params.part_size_mm must be positive");
  const auto& c = p.conveyor;
  require(finite_pos(c.speed_mm_per_s), "params.conveyor.speed_mm_per_s must be positive");
  require(finite_pos(c.belt_length_mm), "params.conveyor.belt_length_mm must be positive");
  require(finite_pos(c.belt_half_width_mm), "params.conveyor.belt_half_width_mm must be positive");
  require(c.beam_sensor_x_mm > p.part_size_mm && c.beam_sensor_x_mm < c.belt_length_mm,
          "params.conveyor.beam_sensor_x_mm must lie on the belt past the entry");
  require(c.camera_window_x_mm > 0.0 && c.camera_window_x_mm < c.belt_length_mm,
          "params.conveyor.camera_window_x_mm must lie on the belt");

  const auto& cam = p.camera;
  require(cam.width_px > 0 && cam.height_px > 0 && finite_pos(cam.mm_per_px), "params.camera has a bad geometry");
  // A part stopped by the beam must be entirely in view.
  const double stop_x = c.beam_sensor_x_mm - p.part_size_mm / 2.0;
  require(std::abs(stop_x - c.camera_window_x_mm) + p.part_size_mm / 2.0 <= cam.half_fov_x_mm(),
          "a part stopped at the beam would not be inside the camera field");

  const auto& o = p.optics;
  check_rgb(o.palette.red, "params.optics.palette.red");
  check_rgb(o.palette.green, "params.optics.palette.green");
  check_rgb(o.palette.blue, "params.optics.palette.blue");
  check_rgb(o.palette.belt, "params.optics.palette.belt");
  check_rgb(o.red_filter, "params.optics.red_filter");
  check_rgb(o.green_filter, "params.optics.green_filter");
  check_rgb(o.blue_filter, "params.optics.blue_filter");
  check_rgb(o.ambient, "params.optics.ambient");
  check_rgb(o.led_residual, "params.optics.led_residual");
  require(o.led_gain > 0.0 && o.led_gain <= 1.2, "params.optics.led_gain must be in (0, 1.2]");
  require(o.edge_margin_mm >= 0.0 && o.edge_leak_factor >= 1.0, "params.optics edge leak settings out of range");

  const auto& v = p.vision;
  require(v.find_threshold_delta > 0.0 && v.find_threshold_delta <= 1.0,
          "params.vision.find_threshold_delta must be in (0,1]");
  require(v.segmentation_delta >= 0.0 && v.segmentation_delta < v.find_threshold_delta,
          "params.vision.segmentation_delta must be below the find threshold");
  require(v.min_area_px >= 1 && v.min_area_px <= v.max_area_px, "params.vision area bounds are inconsistent");

  const auto& a = p.arduino;
  require(finite_pos(a.servo_travel_deg_per_s), "params.arduino.servo_travel_deg_per_s must be positive");
  // The scan program waits .50 s after red->green (90 deg) and .80 s after
  // green->blue (180 deg); a slower wheel would still be moving at the grab.
  require(90.0 / a.servo_travel_deg_per_s <= 0.5 && 180.0 / a.servo_travel_deg_per_s <= 0.8,
          "params.arduino.servo_travel_deg_per_s is too slow for the scan program waits");
  require(a.servo_min_us < a.servo_max_us && a.n_leds > 0, "params.arduino pin constants are inconsistent");

  require(p.bus.rpi_us > 0 && p.bus.extra_latency_ticks >= 0, "params.bus timing is invalid");
  require(p.plc.scan_ms > 0 && p.plc.t1_preset_ms > 0, "params.plc timing is invalid");
  require(finite_pos(p.robot.timing.joint_move_s) && p.robot.timing.vision_processing_s >= 0.0,
          "params.robot timing is invalid");
  require(finite_pos(p.robot.pick_tolerance_mm), "params.robot.pick_tolerance_mm must be positive");
  require(p.sim.physics_tick_us > 0 && finite_pos(p.sim.deadlock_timeout_s), "params.sim timing is invalid");
  require(p.workspace.min.x < p.workspace.max.x && p.workspace.min.y < p.workspace.max.y &&
              p.workspace.min.z < p.workspace.max.z,
          "params.workspace bounds are inconsistent");

  for (std::size_t i = 0; i < s.parts.size(); ++i) {
    const auto& part = s.parts[i];
    const std::string where = "parts[" + std::to_string(i) + "]";
    require(std::isfinite(part.t_s) && part.t_s >= 0.0 && part.t_s < s.duration_s, where + ".t must be in [0, duration)");
    require(part.color != ColorClass::Unknown, where + ".color must be red, green or blue");
    require(std::isfinite(part.y_mm) && lateral_reach(part.y_mm, p.part_size_mm) <= c.belt_half_width_mm,
            where + ".y_mm puts the part over the belt edge");
    require(std::isfinite(part.rz_deg), where + ".rz_deg must be finite");
  }

  if (s.spawner) {
    const auto& sp = *s.spawner;
    require(sp.count >= 0 && sp.count <= 100000, "spawner.count must be in [0, 100000]");
    require(sp.start_s >= 0.0 && sp.start_s < s.duration_s, "spawner.start must be in [0, duration)");
    require(sp.extra_interval_mean_s >= 0.0 && std::isfinite(sp.extra_interval_mean_s),
            "spawner.extra_interval_mean_s must be non-negative");
    require(sp.red_weight >= 0.0 && sp.green_weight >= 0.0 && sp.blue_weight >= 0.0 &&
                sp.red_weight + sp.green_weight + sp.blue_weight > 0.0,
            "spawner weights must be non-negative with a positive sum");
    require(sp.y_max_mm >= 0.0 && lateral_reach(sp.y_max_mm, p.part_size_mm) <= c.belt_half_width_mm,
            "spawner.y_max_mm puts parts over the belt edge");
    require(sp.rz_max_deg >= 0.0 && std::isfinite(sp.rz_max_deg), "spawner.rz_max_deg must be non-negative");
  }

  const auto schedule = spawn_schedule(s);
  const double min_dt = min_spawn_interval_s(p);
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i].t_s - schedule[i - 1].t_s < min_dt - 1e-9) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "parts spawned at %.3f s and %.3f s overlap (minimum spacing %.3f s)",
                    schedule[i - 1].t_s, schedule[i].t_s, min_dt);
      invalid(buf);
    }
  }

  const auto& ladder = plc::default_program();
  for (std::size_t i = 0; i < s.script.size(); ++i) {
    const auto& act = s.script[i];
    const std::string where = "script[" + std::to_string(i) + "]";
    require(std::isfinite(act.t_s) && act.t_s >= 0.0, where + ".t must be non-negative");
    const auto it = std::find_if(ladder.tags.begin(), ladder.tags.end(), [&](const plc::TagDef& t) { return t.name == act.tag; });
    require(it != ladder.tags.end(), where + ".tag '" + act.tag + "' is not a PLC tag");
    require((it->kind == plc::TagKind::LocalInput || it->kind == plc::TagKind::HmiInput) && act.tag != "Beam",
            where + ".tag '" + act.tag + "' is not an operator input");
  }
}

std::vector<PartSpec> spawn_schedule(const Scenario& s) {
  std::vector<PartSpec> out = s.parts;
  if (s.spawner && s.spawner->count > 0) {
    const auto& sp = *s.spawner;
    Stream times(s.seed, 1), colors(s.seed, 2), offsets(s.seed, 3);
    const double min_dt = min_spawn_interval_s(s.params);
    const double total = sp.red_weight + sp.green_weight + sp.blue_weight;
    double t = sp.start_s;
    for (int i = 0; i < sp.count; ++i) {
      if (i > 0) t += min_dt - sp.extra_interval_mean_s * std::log1p(-times.uniform());
      if (t >= s.duration_s) break;
      const double pick = colors.uniform() * total;
      const ColorClass color = pick < sp.red_weight                    ? ColorClass::Red
                               : pick < sp.red_weight + sp.green_weight ? ColorClass::Green
                                                                        : ColorClass::Blue;
      const double y = (2.0 * offsets.uniform() - 1.0) * sp.y_max_mm;
      const double rz = (2.0 * offsets.uniform() - 1.0) * sp.rz_max_deg;
      out.push_back({t, color, y, rz});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const PartSpec& a, const PartSpec& b) { return a.t_s < b.t_s; });
  return out;
}

}  // namespace sortcell::sim
