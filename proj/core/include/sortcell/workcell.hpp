#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sortcell {

/// Per-channel triple. Used for reflectance, filter transmission and light
/// emission; the owning type documents the admissible range.
struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Fraction of each channel's light a surface reflects, each in [0,1].
using ReflectanceRGB = Rgb;

bool in_unit_range(const Rgb& c) noexcept;

enum class ColorClass { Red, Green, Blue, Unknown };
enum class PartState { OnBelt, HeldByRobot, InRejectBin, PassedThrough };

std::string_view to_string(ColorClass c) noexcept;
std::string_view to_string(PartState s) noexcept;
std::optional<ColorClass> parse_color_class(std::string_view s) noexcept;
std::optional<PartState> parse_part_state(std::string_view s) noexcept;

/// Cartesian tool/part pose in the cell frame: x along the belt, y lateral
/// from the belt centerline, z up from the belt surface, rz about z.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double rz = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
  Pose operator+(const Pose& o) const { return {x + o.x, y + o.y, z + o.z, rz + o.rz}; }
};

double distance_mm(const Pose& a, const Pose& b) noexcept;

/// One flag per block color (detections, operator selections).
struct ColorFlags {
  bool red = false;
  bool green = false;
  bool blue = false;

  bool has(ColorClass c) const noexcept;
  friend bool operator==(const ColorFlags&, const ColorFlags&) = default;
};

struct Part {
  int id = 0;
  ColorClass color_class = ColorClass::Unknown;
  ReflectanceRGB reflectance{};
  double x_mm = 0.0;  // belt coordinate of the footprint center
  double y_mm = 0.0;  // lateral offset from centerline
  double z_mm = 0.0;  // bottom face height; nonzero only while held
  double rotation_deg = 0.0;
  double size_mm = 40.0;
  PartState state = PartState::OnBelt;

  friend bool operator==(const Part&, const Part&) = default;
};

struct ConveyorState {
  bool running = false;
  double speed_mm_per_s = 100.0;
  double belt_length_mm = 1200.0;
  double belt_half_width_mm = 150.0;
  double beam_sensor_x_mm = 600.0;
  double camera_window_x_mm = 580.0;

  friend bool operator==(const ConveyorState&, const ConveyorState&) = default;
};

struct RejectBin {
  std::vector<int> contents;
  Pose location{580.0, 300.0, 0.0, 0.0};
  double radius_mm = 100.0;

  bool accepts(const Pose& tool) const noexcept;
};

/// Reachable tool volume (axis-aligned box in the cell frame).
struct Workspace {
  Pose min{0.0, -450.0, 0.0, 0.0};
  Pose max{1200.0, 450.0, 600.0, 0.0};

  bool contains(const Pose& p) const noexcept;
  friend bool operator==(const Workspace&, const Workspace&) = default;
};

/// Index of the OnBelt part the suction cup would grab: tool xy within
/// `xy_tolerance_mm` of the part center and tool z within `z_tolerance_mm` of
/// the part's top face. Closest part wins.
std::optional<std::size_t> pick_candidate(std::span<const Part> parts, const Pose& tool,
                                          double xy_tolerance_mm, double z_tolerance_mm = 2.0) noexcept;

/// Default reflectance for the three block colors and the belt surface.
struct PaletteDefaults {
  ReflectanceRGB red{0.80, 0.10, 0.08};
  ReflectanceRGB green{0.10, 0.70, 0.12};
  ReflectanceRGB blue{0.08, 0.12, 0.75};
  ReflectanceRGB belt{0.05, 0.05, 0.05};

  ReflectanceRGB for_color(ColorClass c) const noexcept;

  friend bool operator==(const PaletteDefaults&, const PaletteDefaults&) = default;
};

/// Moves every OnBelt part forward by speed * dt when the belt runs. Parts
/// whose trailing edge leaves the belt become PassedThrough. Order is kept.
void advance_conveyor(const ConveyorState& state, std::vector<Part>& parts, double dt_s);

/// True iff some OnBelt part's x-extent [x - size/2, x + size/2] contains the
/// beam line.
bool beam_blocked(const ConveyorState& state, std::span<const Part> parts) noexcept;

/// Id of the first OnBelt part straddling the beam, if any.
std::optional<int> part_at_beam(const ConveyorState& state, std::span<const Part> parts) noexcept;

}  // namespace sortcell
