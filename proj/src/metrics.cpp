#include "railedge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "railedge/edge_ops.hpp"
#include "railedge/errors.hpp"

namespace railedge {

namespace {

void require_same_shape(const MaskGrid& a, const MaskGrid& b, const char* what) {
  if (!a.same_shape(b)) throw ValidationError(std::string(what) + ": shape mismatch");
}

// Marks pixels whose class differs from at least one in-grid 4-neighbour.
template <typename ClassOf>
std::vector<bool> contour_band(const MaskGrid& mask, ClassOf class_of) {
  const std::size_t h = mask.height();
  const std::size_t w = mask.width();
  std::vector<bool> band(h * w, false);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const int here = class_of(mask(r, c));
      const bool differs = (r > 0 && class_of(mask(r - 1, c)) != here) ||
                           (r + 1 < h && class_of(mask(r + 1, c)) != here) ||
                           (c > 0 && class_of(mask(r, c - 1)) != here) ||
                           (c + 1 < w && class_of(mask(r, c + 1)) != here);
      band[r * w + c] = differs;
    }
  }
  return band;
}

// Square (Chebyshev) dilation by `radius`, done as two 1-D running passes.
std::vector<bool> dilate(const std::vector<bool>& in, std::size_t h, std::size_t w,
                         std::size_t radius) {
  std::vector<bool> tmp(h * w, false);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!in[r * w + c]) continue;
      const std::size_t lo = c >= radius ? c - radius : 0;
      const std::size_t hi = std::min(w - 1, c + radius);
      for (std::size_t x = lo; x <= hi; ++x) tmp[r * w + x] = true;
    }
  }
  std::vector<bool> out(h * w, false);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!tmp[r * w + c]) continue;
      const std::size_t lo = r >= radius ? r - radius : 0;
      const std::size_t hi = std::min(h - 1, r + radius);
      for (std::size_t y = lo; y <= hi; ++y) out[y * w + c] = true;
    }
  }
  return out;
}

}  // namespace

double iou(const MaskGrid& pred_mask, const MaskGrid& gt_mask) {
  require_same_shape(pred_mask, gt_mask, "iou");
  const auto p = pred_mask.values();
  const auto g = gt_mask.values();
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool a = p[i] >= 0.5;
    const bool b = g[i] >= 0.5;
    inter += (a && b) ? 1 : 0;
    uni += (a || b) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<bool> boundary_pixels(const MaskGrid& mask) {
  return contour_band(mask, [](double v) { return v >= 0.5 ? 1 : 0; });
}

double boundary_f1(const MaskGrid& pred_mask, const MaskGrid& gt_mask, std::size_t tolerance) {
  require_same_shape(pred_mask, gt_mask, "boundary_f1");
  const std::size_t h = pred_mask.height();
  const std::size_t w = pred_mask.width();
  const auto bp = boundary_pixels(pred_mask);
  const auto bg = boundary_pixels(gt_mask);
  const auto np = static_cast<std::size_t>(std::count(bp.begin(), bp.end(), true));
  const auto ng = static_cast<std::size_t>(std::count(bg.begin(), bg.end(), true));
  if (np == 0 && ng == 0) return 1.0;
  if (np == 0 || ng == 0) return 0.0;

  const auto near_g = dilate(bg, h, w, tolerance);
  const auto near_p = dilate(bp, h, w, tolerance);
  std::size_t matched_p = 0;
  std::size_t matched_g = 0;
  for (std::size_t i = 0; i < h * w; ++i) {
    if (bp[i] && near_g[i]) ++matched_p;
    if (bg[i] && near_p[i]) ++matched_g;
  }
  const double precision = static_cast<double>(matched_p) / static_cast<double>(np);
  const double recall = static_cast<double>(matched_g) / static_cast<double>(ng);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double jaggedness(const MaskGrid& mask) {
  if (mask.height() < 3 || mask.width() < 3) {
    throw DimensionError("jaggedness: mask must be at least 3x3");
  }
  const auto band = contour_band(mask, [](double v) { return v > 0.5 ? 1 : (v < 0.5 ? -1 : 0); });
  const MaskGrid response = correlate(mask, laplacian_kernel(), PaddingMode::Replicate);
  const auto lap = response.values();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < band.size(); ++i) {
    if (!band[i]) continue;
    sum += std::abs(lap[i]);
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace railedge
