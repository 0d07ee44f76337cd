#pragma once

#include <cstddef>

#include "railedge/edge_ops.hpp"
#include "railedge/grid.hpp"

namespace railedge {

struct GridSize {
  std::size_t height = 0;
  std::size_t width = 0;

  friend bool operator==(const GridSize&, const GridSize&) = default;
};

/// Label preparation settings: full-resolution masks are bilinearly
/// downscaled to the prediction resolution, then box-filtered.
struct GtConfig {
  GridSize source_size{800, 800};
  GridSize target_size{200, 200};
  std::size_t box_size = 3;
  bool smoothing_enabled = true;
  PaddingMode padding = PaddingMode::Replicate;
  /// Edge targets come from the smoothed mask when true, from the
  /// interpolated (unsmoothed) mask otherwise.
  bool edge_target_from_smoothed = true;

  void validate() const;
};

struct GtLabel {
  MaskGrid mask_smoothed;
  MaskGrid mask_raw;
  EdgeMap edge_target;
};

GtLabel prepare_gt(const MaskGrid& full_mask, const GtConfig& cfg, EdgeOperator op);

/// Horizontal extent [left, right] of a trapezoid side, in pixel units.
struct Span {
  double left = 0.0;
  double right = 0.0;
};

/// Rail-like quadrilateral bounded by two horizontal edges. Coordinates are
/// continuous: pixel (r, c) covers [r, r+1) x [c, c+1) and its centre sits
/// at (r + 0.5, c + 0.5).
struct Trapezoid {
  Span top;
  double top_row = 0.0;
  Span bottom;
  double bottom_row = 0.0;

  double area() const noexcept;
  /// Throws ValidationError for degenerate geometry or geometry that does
  /// not fit inside `size`.
  void validate(GridSize size) const;
};

/// Binary mask with 1 where the pixel centre lies inside the trapezoid
/// (boundary inclusive).
MaskGrid rasterize_trapezoid(const Trapezoid& trap, GridSize size);

}  // namespace railedge
