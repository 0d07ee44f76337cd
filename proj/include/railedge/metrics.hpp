#pragma once

#include <cstddef>
#include <vector>

#include "railedge/grid.hpp"

namespace railedge {

/// Boundary-F tolerance used by default at 200x200 (Chebyshev pixels).
inline constexpr std::size_t kDefaultBoundaryTolerance = 2;

/// Intersection over union of the masks binarized at >= 0.5. Two empty
/// masks score 1.
double iou(const MaskGrid& pred_mask, const MaskGrid& gt_mask);

/// Pixels of the mask binarized at >= 0.5 that have a 4-neighbour of the
/// opposite class. Both sides of the contour are included.
std::vector<bool> boundary_pixels(const MaskGrid& mask);

/// F1 of boundary precision and recall, a boundary pixel counting as matched
/// when the other mask has a boundary pixel within Chebyshev distance
/// `tolerance`. Empty boundaries on both sides score 1, on one side 0.
double boundary_f1(const MaskGrid& pred_mask, const MaskGrid& gt_mask,
                   std::size_t tolerance = kDefaultBoundaryTolerance);

/// Mean |Laplacian| of the soft mask (replicate padding) over the 0.5-level
/// boundary band: pixels having a 4-neighbour on the other side of 0.5
/// (sign(v - 0.5) differs). 0 when the band is empty. Lower is smoother.
double jaggedness(const MaskGrid& mask);

}  // namespace railedge
