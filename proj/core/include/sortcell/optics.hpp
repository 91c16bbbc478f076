#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sortcell/workcell.hpp"

namespace sortcell {

enum class FilterName { RedFilter, GreenFilter, BlueFilter, NoFilter };
enum class ScanChannel { Red, Green, Blue, None };

std::string_view to_string(FilterName f) noexcept;
ScanChannel channel_of(FilterName f) noexcept;

struct FilterSpec {
  FilterName name = FilterName::NoFilter;
  Rgb transmission{1.0, 1.0, 1.0};

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// Light falling on the scene, per channel in [0, 1.2].
struct LightSpec {
  Rgb emission{};

  friend bool operator==(const LightSpec&, const LightSpec&) = default;
};

/// 8-bit LED ring color as written by the microcontroller.
struct Led8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Led8&, const Led8&) = default;
};

struct OpticsParams {
  PaletteDefaults palette{};
  Rgb red_filter{0.85, 0.10, 0.08};
  // Cheap filters: green and blue pass a lot of each other's band.
  Rgb green_filter{0.10, 0.60, 0.55};
  Rgb blue_filter{0.08, 0.55, 0.60};
  Rgb ambient{0.6, 0.6, 0.6};
  Rgb led_residual{0.1, 0.1, 0.1};
  double led_gain = 1.0;
  double edge_margin_mm = 60.0;
  double edge_leak_factor = 2.0;

  friend bool operator==(const OpticsParams&, const OpticsParams&) = default;
};

FilterSpec make_filter(FilterName name, const OpticsParams& params);

/// LED ring light: gain * rgb/255 plus the residual on every channel.
LightSpec led_light(Led8 led, const OpticsParams& params);
LightSpec ambient_light(const OpticsParams& params);

/// Brightness seen by a monochrome sensor:
/// clamp(sum_c light_c * transmission_c * reflectance_c, 0, 1).
double pixel_intensity(const ReflectanceRGB& reflectance, const FilterSpec& filter,
                       const LightSpec& light) noexcept;

/// Reflectance as seen by a scan on `channel`. A blue-dominant part more
/// than edge_margin_mm off the centerline leaks into the green scan: its
/// green reflectance is scaled by edge_leak_factor (clamped to 1).
ReflectanceRGB apply_edge_leak(const Part& part, ScanChannel channel,
                               const OpticsParams& params) noexcept;

struct CameraConfig {
  int width_px = 640;
  int height_px = 480;
  double mm_per_px = 0.5;
  double center_x_mm = 580.0;
  double center_y_mm = 0.0;

  double half_fov_x_mm() const noexcept { return width_px * mm_per_px / 2.0; }
  double half_fov_y_mm() const noexcept { return height_px * mm_per_px / 2.0; }
  double pixel_center_x_mm(int col) const noexcept;
  double pixel_center_y_mm(int row) const noexcept;

  friend bool operator==(const CameraConfig&, const CameraConfig&) = default;
};

struct GrayImage {
  int width_px = 0;
  int height_px = 0;
  std::vector<double> pixels;  // row-major, each in [0,1]

  GrayImage() = default;
  GrayImage(int w, int h, double fill);

  double at(int col, int row) const { return pixels[static_cast<std::size_t>(row) * width_px + col]; }
  double& at(int col, int row) { return pixels[static_cast<std::size_t>(row) * width_px + col]; }
};

/// Filter currently in front of the lens and whether the wheel has stopped.
struct FilterPosition {
  FilterSpec filter{};
  bool settled = true;
};

/// Renders OnBelt parts inside the camera window over the belt background.
/// Throws CameraObstructed when the wheel is still moving.
GrayImage render(std::span<const Part> parts, const FilterPosition& wheel, const LightSpec& light,
                 const CameraConfig& camera, const OpticsParams& params);

/// Binary PGM (P5, maxval 255, row-major).
void write_pgm(std::ostream& out, const GrayImage& image);

}  // namespace sortcell
