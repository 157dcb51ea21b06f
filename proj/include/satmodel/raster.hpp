#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satmodel/model.hpp"

namespace satmodel {

struct Window {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;
  std::size_t width = 1;
  std::size_t height = 1;

  void validate() const;
  /// Pixel centers. Row 0 is the top (y_max); rows are placed symmetrically
  /// about the middle of the window so a symmetric window gives y_j = -y_{H-1-j}.
  double x_at(std::size_t i) const;
  double y_at(std::size_t j) const;
};

/// Per-pixel escape depth: d in 0..max_depth is the first level whose image
/// leaves the closed disk, max_depth + 1 marks survival through max_depth.
struct DepthGrid {
  Window window;
  std::size_t max_depth = 0;
  std::vector<std::uint16_t> depths;

  std::uint16_t survived() const { return static_cast<std::uint16_t>(max_depth + 1); }
  std::uint16_t at(std::size_t i, std::size_t j) const { return depths[j * window.width + i]; }
};

enum class Backend { kAuto, kFast, kExact };

struct RenderOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  Backend backend = Backend::kAuto;
};

/// Whether the double-precision kernel is accurate enough for these levels:
/// exact denominators with sum of log2(q_k) <= 40 over levels 0..max_depth.
bool fast_kernel_suitable(const ModelParams& params, std::size_t max_depth);

/// Evaluates levels 0..max_depth at every pixel center.
DepthGrid render_depth_grid(const ModelParams& params, const Window& window, std::size_t max_depth,
                            const RenderOptions& options = {});

/// Escape depth of one point with the double kernel (same convention as the grid).
std::uint16_t fast_depth(const ModelParams& params, double x, double y, std::size_t max_depth);

/// 4-connected components of {depth > n}.
std::size_t count_components(const DepthGrid& grid, std::size_t n);

/// Component labels of {depth > n}; -1 outside the mask. Labels are 0..count-1.
std::vector<std::int32_t> label_components(const DepthGrid& grid, std::size_t n, std::size_t* count = nullptr);

struct RealSlice {
  bool found = false;
  /// The component meeting the real row at the pixel closest to x = 1
  /// meets that row in one contiguous run.
  bool contiguous = false;
  double left = 0.0;
  double right = 0.0;
  double pixel_width = 0.0;
};

/// Real-axis slice of the component of {depth > n} containing the pixel of
/// the y = 0 row nearest to x = 1. The window must have a y = 0 row.
RealSlice critical_real_slice(const DepthGrid& grid, std::size_t n);

/// Gray level per depth value 0..max_depth+1.
using Palette = std::vector<std::uint8_t>;
/// Escaped at 0 -> black; bands K_{d-1} \ K_d in increasing lightness;
/// survivors dark.
Palette default_palette(std::size_t max_depth);

/// Binary PGM: "P5 W H 255\n" followed by row-major bytes, top row first.
std::string write_image(const DepthGrid& grid, const Palette& palette);
void write_image_file(const std::string& path, const DepthGrid& grid, const Palette& palette);

}  // namespace satmodel
