#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "sortcell/optics.hpp"

namespace sortcell {

/// Contrast blob finder configuration (one per taught vision process).
struct VisionProcess {
  std::string name = "REDSCAN";
  double find_threshold_delta = 0.15;
  int min_area_px = 3200;
  int max_area_px = 12800;
  /// Pixels brighter than background by more than this are foreground
  /// candidates; the find threshold then applies to the region mean.
  double segmentation_delta = 0.01;

  friend bool operator==(const VisionProcess&, const VisionProcess&) = default;
};

/// Result register: offsets from the taught reference (the camera center).
struct VisionRegister {
  bool found = false;
  double x_mm = 0.0;
  double y_mm = 0.0;
  double rz_deg = 0.0;

  friend bool operator==(const VisionRegister&, const VisionRegister&) = default;
};

/// The three processes the scan program calls, by their taught names.
bool is_known_process(std::string_view name) noexcept;
/// Filter the process was taught with (REDSCAN -> RedFilter, ...).
std::optional<FilterName> taught_filter(std::string_view process) noexcept;

/// Modal pixel intensity; ties go to the darker value.
double background_mode(const GrayImage& image);

/// Finds the best qualifying contrast blob. A 4-connected region of
/// foreground pixels qualifies when its mean minus the background mode is at
/// least find_threshold_delta and its area lies in [min_area_px, max_area_px].
/// Candidates rank by larger area, then smaller centroid x, then smaller y;
/// an exact tie after that raises AmbiguousScene.
VisionRegister run_find(const VisionProcess& process, const GrayImage& image,
                        const CameraConfig& camera);

}  // namespace sortcell
