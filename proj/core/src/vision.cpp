#include "sortcell/vision.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "sortcell/errors.hpp"

namespace sortcell {

namespace {

struct Region {
  long area = 0;
  double sum_intensity = 0.0;
  double cx = 0.0;  // pixel-space centroid
  double cy = 0.0;
  double mu20 = 0.0;
  double mu02 = 0.0;
  double mu11 = 0.0;
};

// Relative second-moment anisotropy below which a blob has no usable
// principal axis (squares and discs).
constexpr double kIsotropyTolerance = 0.05;

}  // namespace

bool is_known_process(std::string_view name) noexcept { return taught_filter(name).has_value(); }

std::optional<FilterName> taught_filter(std::string_view process) noexcept {
  if (process == "REDSCAN") return FilterName::RedFilter;
  if (process == "GRNSCAN") return FilterName::GreenFilter;
  if (process == "BLUSCAN") return FilterName::BlueFilter;
  return std::nullopt;
}

double background_mode(const GrayImage& image) {
  std::unordered_map<double, long> counts;
  counts.reserve(64);
  for (double v : image.pixels) ++counts[v];
  double best = 0.0;
  long best_count = -1;
  for (const auto& [value, count] : counts) {
    if (count > best_count || (count == best_count && value < best)) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

VisionRegister run_find(const VisionProcess& process, const GrayImage& image,
                        const CameraConfig& camera) {
  if (image.width_px != camera.width_px || image.height_px != camera.height_px)
    throw Error("image dimensions do not match camera configuration");

  const double bg = background_mode(image);
  const int w = image.width_px;
  const int h = image.height_px;
  std::vector<int> label(image.pixels.size(), -1);
  std::vector<Region> regions;
  std::vector<int> stack;
  std::vector<int> members;

  auto foreground = [&](int idx) { return image.pixels[static_cast<std::size_t>(idx)] - bg > process.segmentation_delta; };

  for (int start = 0; start < w * h; ++start) {
    if (label[static_cast<std::size_t>(start)] != -1 || !foreground(start)) continue;
    const int id = static_cast<int>(regions.size());
    Region reg;
    members.clear();
    stack.push_back(start);
    label[static_cast<std::size_t>(start)] = id;
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      members.push_back(idx);
      const int col = idx % w;
      const int row = idx / w;
      auto visit = [&](int c, int r) {
        if (c < 0 || r < 0 || c >= w || r >= h) return;
        const int n = r * w + c;
        if (label[static_cast<std::size_t>(n)] == -1 && foreground(n)) {
          label[static_cast<std::size_t>(n)] = id;
          stack.push_back(n);
        }
      };
      visit(col - 1, row);
      visit(col + 1, row);
      visit(col, row - 1);
      visit(col, row + 1);
    }
    // Sort members so accumulation order (and thus rounding) depends only on
    // the region, not on flood-fill order.
    std::sort(members.begin(), members.end());
    for (int idx : members) {
      reg.area += 1;
      reg.sum_intensity += image.pixels[static_cast<std::size_t>(idx)];
      reg.cx += idx % w;
      reg.cy += idx / w;
    }
    reg.cx /= static_cast<double>(reg.area);
    reg.cy /= static_cast<double>(reg.area);
    for (int idx : members) {
      const double dx = idx % w - reg.cx;
      const double dy = idx / w - reg.cy;
      reg.mu20 += dx * dx;
      reg.mu02 += dy * dy;
      reg.mu11 += dx * dy;
    }
    regions.push_back(reg);
  }

  std::vector<const Region*> qualifying;
  for (const auto& r : regions) {
    const double mean = r.sum_intensity / static_cast<double>(r.area);
    if (mean - bg >= process.find_threshold_delta && r.area >= process.min_area_px &&
        r.area <= process.max_area_px)
      qualifying.push_back(&r);
  }
  if (qualifying.empty()) return {};

  auto better = [](const Region* a, const Region* b) {
    if (a->area != b->area) return a->area > b->area;
    if (a->cx != b->cx) return a->cx < b->cx;
    return a->cy < b->cy;
  };
  std::sort(qualifying.begin(), qualifying.end(), better);
  if (qualifying.size() > 1 && !better(qualifying[0], qualifying[1]))
    throw AmbiguousScene("two vision candidates tie on area and centroid");

  const Region& best = *qualifying.front();
  VisionRegister out;
  out.found = true;
  out.x_mm = (best.cx + 0.5 - w / 2.0) * camera.mm_per_px;
  out.y_mm = (best.cy + 0.5 - h / 2.0) * camera.mm_per_px;
  const double spread = best.mu20 + best.mu02;
  const double aniso = spread > 0.0
                           ? std::hypot(best.mu20 - best.mu02, 2.0 * best.mu11) / spread
                           : 0.0;
  if (aniso >= kIsotropyTolerance)
    out.rz_deg = 0.5 * std::atan2(2.0 * best.mu11, best.mu20 - best.mu02) * 180.0 / std::numbers::pi;
  return out;
}

}  // namespace sortcell
