#include "sortcell/workcell.hpp"

#include <cmath>

namespace sortcell {

bool in_unit_range(const Rgb& c) noexcept {
  auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
  return ok(c.r) && ok(c.g) && ok(c.b);
}

std::string_view to_string(ColorClass c) noexcept {
  switch (c) {
    case ColorClass::Red: return "red";
    case ColorClass::Green: return "green";
    case ColorClass::Blue: return "blue";
    case ColorClass::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(PartState s) noexcept {
  switch (s) {
    case PartState::OnBelt: return "OnBelt";
    case PartState::HeldByRobot: return "HeldByRobot";
    case PartState::InRejectBin: return "InRejectBin";
    case PartState::PassedThrough: return "PassedThrough";
  }
  return "OnBelt";
}

std::optional<ColorClass> parse_color_class(std::string_view s) noexcept {
  if (s == "red") return ColorClass::Red;
  if (s == "green") return ColorClass::Green;
  if (s == "blue") return ColorClass::Blue;
  if (s == "unknown") return ColorClass::Unknown;
  return std::nullopt;
}

std::optional<PartState> parse_part_state(std::string_view s) noexcept {
  for (auto st : {PartState::OnBelt, PartState::HeldByRobot, PartState::InRejectBin,
                  PartState::PassedThrough}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

double distance_mm(const Pose& a, const Pose& b) noexcept {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

bool ColorFlags::has(ColorClass c) const noexcept {
  switch (c) {
    case ColorClass::Red: return red;
    case ColorClass::Green: return green;
    case ColorClass::Blue: return blue;
    case ColorClass::Unknown: break;
  }
  return false;
}

bool RejectBin::accepts(const Pose& tool) const noexcept {
  return std::hypot(tool.x - location.x, tool.y - location.y) <= radius_mm;
}

bool Workspace::contains(const Pose& p) const noexcept {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
}

std::optional<std::size_t> pick_candidate(std::span<const Part> parts, const Pose& tool,
                                          double xy_tolerance_mm, double z_tolerance_mm) noexcept {
  std::optional<std::size_t> best;
  double best_d = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    if (p.state != PartState::OnBelt) continue;
    const double d = std::hypot(tool.x - p.x_mm, tool.y - p.y_mm);
    if (d > xy_tolerance_mm || std::abs(tool.z - (p.z_mm + p.size_mm)) > z_tolerance_mm) continue;
    if (!best || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

ReflectanceRGB PaletteDefaults::for_color(ColorClass c) const noexcept {
  switch (c) {
    case ColorClass::Red: return red;
    case ColorClass::Green: return green;
    case ColorClass::Blue: return blue;
    case ColorClass::Unknown: break;
  }
  return Rgb{0.5, 0.5, 0.5};
}

void advance_conveyor(const ConveyorState& state, std::vector<Part>& parts, double dt_s) {
  if (!state.running || dt_s <= 0.0) return;
  const double dx = state.speed_mm_per_s * dt_s;
  for (auto& p : parts) {
    if (p.state != PartState::OnBelt) continue;
    p.x_mm += dx;
    if (p.x_mm - p.size_mm / 2.0 > state.belt_length_mm) p.state = PartState::PassedThrough;
  }
}

std::optional<int> part_at_beam(const ConveyorState& state, std::span<const Part> parts) noexcept {
  for (const auto& p : parts) {
    if (p.state != PartState::OnBelt) continue;
    const double half = p.size_mm / 2.0;
    if (p.x_mm - half <= state.beam_sensor_x_mm && state.beam_sensor_x_mm <= p.x_mm + half)
      return p.id;
  }
  return std::nullopt;
}

bool beam_blocked(const ConveyorState& state, std::span<const Part> parts) noexcept {
  return part_at_beam(state, parts).has_value();
}

}  // namespace sortcell
