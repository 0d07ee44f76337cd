#include "railedge/gt_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "railedge/errors.hpp"

namespace railedge {

void GtConfig::validate() const {
  if (source_size.height == 0 || source_size.width == 0 || target_size.height == 0 ||
      target_size.width == 0) {
    throw ValidationError("GtConfig: sizes must be positive");
  }
  if (target_size.height > source_size.height || target_size.width > source_size.width) {
    throw ValidationError("GtConfig: target size must not exceed source size");
  }
  if (box_size == 0 || box_size % 2 == 0) {
    throw ValidationError("GtConfig: box_size must be odd and positive, got " +
                          std::to_string(box_size));
  }
  if (smoothing_enabled && box_size > std::min(target_size.height, target_size.width)) {
    throw ValidationError("GtConfig: box_size exceeds target size");
  }
}

GtLabel prepare_gt(const MaskGrid& full_mask, const GtConfig& cfg, EdgeOperator op) {
  cfg.validate();
  if (full_mask.height() != cfg.source_size.height || full_mask.width() != cfg.source_size.width) {
    throw ValidationError("prepare_gt: mask is " + std::to_string(full_mask.height()) + "x" +
                          std::to_string(full_mask.width()) + ", expected " +
                          std::to_string(cfg.source_size.height) + "x" +
                          std::to_string(cfg.source_size.width));
  }
  if (!full_mask.is_binary()) {
    throw ValidationError("prepare_gt: full-resolution mask must be binary");
  }

  MaskGrid raw = resize_bilinear(full_mask, cfg.target_size.height, cfg.target_size.width);
  MaskGrid smoothed = cfg.smoothing_enabled ? box_filter(raw, cfg.box_size, cfg.padding) : raw;
  EdgeMap edges =
      extract_edges(cfg.edge_target_from_smoothed ? smoothed : raw, op, cfg.padding);
  return {std::move(smoothed), std::move(raw), std::move(edges)};
}

double Trapezoid::area() const noexcept {
  const double top_len = top.right - top.left;
  const double bottom_len = bottom.right - bottom.left;
  return 0.5 * (top_len + bottom_len) * (bottom_row - top_row);
}

void Trapezoid::validate(GridSize size) const {
  if (size.height == 0 || size.width == 0) {
    throw ValidationError("trapezoid: grid size must be positive");
  }
  const bool finite = std::isfinite(top.left) && std::isfinite(top.right) &&
                      std::isfinite(bottom.left) && std::isfinite(bottom.right) &&
                      std::isfinite(top_row) && std::isfinite(bottom_row);
  if (!finite || !(top_row < bottom_row) || !(top.left < top.right) ||
      !(bottom.left < bottom.right)) {
    throw ValidationError("trapezoid: degenerate geometry");
  }
  const auto h = static_cast<double>(size.height);
  const auto w = static_cast<double>(size.width);
  if (top_row < 0.0 || bottom_row > h || top.left < 0.0 || bottom.left < 0.0 || top.right > w ||
      bottom.right > w) {
    throw ValidationError("trapezoid: geometry outside the grid");
  }
}

MaskGrid rasterize_trapezoid(const Trapezoid& trap, GridSize size) {
  trap.validate(size);

  MaskGrid mask(size.height, size.width);
  const double span_rows = trap.bottom_row - trap.top_row;
  for (std::size_t r = 0; r < size.height; ++r) {
    const double y = static_cast<double>(r) + 0.5;
    if (y < trap.top_row || y > trap.bottom_row) continue;
    const double t = (y - trap.top_row) / span_rows;
    const double left = std::lerp(trap.top.left, trap.bottom.left, t);
    const double right = std::lerp(trap.top.right, trap.bottom.right, t);
    for (std::size_t c = 0; c < size.width; ++c) {
      const double x = static_cast<double>(c) + 0.5;
      if (x >= left && x <= right) mask(r, c) = 1.0;
    }
  }
  return mask;
}

}  // namespace railedge
