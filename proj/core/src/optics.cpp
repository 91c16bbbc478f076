#include "sortcell/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "sortcell/errors.hpp"

namespace sortcell {

std::string_view to_string(FilterName f) noexcept {
  switch (f) {
    case FilterName::RedFilter: return "RedFilter";
    case FilterName::GreenFilter: return "GreenFilter";
    case FilterName::BlueFilter: return "BlueFilter";
    case FilterName::NoFilter: return "NoFilter";
  }
  return "NoFilter";
}

ScanChannel channel_of(FilterName f) noexcept {
  switch (f) {
    case FilterName::RedFilter: return ScanChannel::Red;
    case FilterName::GreenFilter: return ScanChannel::Green;
    case FilterName::BlueFilter: return ScanChannel::Blue;
    case FilterName::NoFilter: break;
  }
  return ScanChannel::None;
}

FilterSpec make_filter(FilterName name, const OpticsParams& params) {
  switch (name) {
    case FilterName::RedFilter: return {name, params.red_filter};
    case FilterName::GreenFilter: return {name, params.green_filter};
    case FilterName::BlueFilter: return {name, params.blue_filter};
    case FilterName::NoFilter: break;
  }
  return {FilterName::NoFilter, Rgb{1.0, 1.0, 1.0}};
}

LightSpec led_light(Led8 led, const OpticsParams& params) {
  const double k = params.led_gain / 255.0;
  return {Rgb{k * led.r + params.led_residual.r, k * led.g + params.led_residual.g,
              k * led.b + params.led_residual.b}};
}

LightSpec ambient_light(const OpticsParams& params) { return {params.ambient}; }

double pixel_intensity(const ReflectanceRGB& reflectance, const FilterSpec& filter,
                       const LightSpec& light) noexcept {
  const auto& t = filter.transmission;
  const auto& e = light.emission;
  const double sum = e.r * t.r * reflectance.r + e.g * t.g * reflectance.g +
                     e.b * t.b * reflectance.b;
  return std::clamp(sum, 0.0, 1.0);
}

ReflectanceRGB apply_edge_leak(const Part& part, ScanChannel channel,
                               const OpticsParams& params) noexcept {
  ReflectanceRGB out = part.reflectance;
  const bool blue_dominant = out.b > out.r && out.b > out.g;
  if (channel == ScanChannel::Green && blue_dominant &&
      std::abs(part.y_mm) > params.edge_margin_mm) {
    out.g = std::min(1.0, out.g * params.edge_leak_factor);
  }
  return out;
}

double CameraConfig::pixel_center_x_mm(int col) const noexcept {
  return center_x_mm + (col + 0.5 - width_px / 2.0) * mm_per_px;
}

double CameraConfig::pixel_center_y_mm(int row) const noexcept {
  return center_y_mm + (row + 0.5 - height_px / 2.0) * mm_per_px;
}

GrayImage::GrayImage(int w, int h, double fill)
    : width_px(w), height_px(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

GrayImage render(std::span<const Part> parts, const FilterPosition& wheel, const LightSpec& light,
                 const CameraConfig& camera, const OpticsParams& params) {
  if (!wheel.settled) throw CameraObstructed("filter wheel is moving; frame would be obstructed");

  const double background = pixel_intensity(params.palette.belt, wheel.filter, light);
  GrayImage img(camera.width_px, camera.height_px, background);
  const ScanChannel channel = channel_of(wheel.filter.name);

  for (const auto& part : parts) {
    if (part.state != PartState::OnBelt) continue;
    const double value = pixel_intensity(apply_edge_leak(part, channel, params), wheel.filter, light);

    const double half = part.size_mm / 2.0;
    const double reach = half * std::numbers::sqrt2;
    const double rad = part.rotation_deg * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);

    // Pixel index range covering the rotated footprint's bounding circle.
    auto col_of = [&](double x) { return (x - camera.center_x_mm) / camera.mm_per_px + camera.width_px / 2.0; };
    auto row_of = [&](double y) { return (y - camera.center_y_mm) / camera.mm_per_px + camera.height_px / 2.0; };
    const int c0 = std::max(0, static_cast<int>(std::floor(col_of(part.x_mm - reach))));
    const int c1 = std::min(camera.width_px - 1, static_cast<int>(std::ceil(col_of(part.x_mm + reach))));
    const int r0 = std::max(0, static_cast<int>(std::floor(row_of(part.y_mm - reach))));
    const int r1 = std::min(camera.height_px - 1, static_cast<int>(std::ceil(row_of(part.y_mm + reach))));

    for (int row = r0; row <= r1; ++row) {
      const double dy = camera.pixel_center_y_mm(row) - part.y_mm;
      for (int col = c0; col <= c1; ++col) {
        const double dx = camera.pixel_center_x_mm(col) - part.x_mm;
        const double u = c * dx + s * dy;
        const double v = -s * dx + c * dy;
        if (std::abs(u) <= half && std::abs(v) <= half) img.at(col, row) = value;
      }
    }
  }
  return img;
}

void write_pgm(std::ostream& out, const GrayImage& image) {
  out << "P5\n" << image.width_px << ' ' << image.height_px << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(image.width_px));
  for (int r = 0; r < image.height_px; ++r) {
    for (int c = 0; c < image.width_px; ++c) {
      const double v = std::clamp(image.at(c, r), 0.0, 1.0);
      row[static_cast<std::size_t>(c)] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

}  // namespace sortcell
