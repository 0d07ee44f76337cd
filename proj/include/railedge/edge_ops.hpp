#pragma once

#include <string_view>
#include <utility>

#include "railedge/grid.hpp"

namespace railedge {

enum class EdgeOperator { Sobel, Laplacian };

/// Normalized edge-strength map in [0, 1], same shape as its source mask.
struct EdgeMap {
  MaskGrid grid;
  EdgeOperator op;
};

/// (S_x, S_y): horizontal and vertical first-derivative kernels.
std::pair<Kernel, Kernel> sobel_kernels();

/// 4-neighbour discrete Laplacian [[0,1,0],[1,-4,1],[0,1,0]].
Kernel laplacian_kernel();

/// Divisor that maps the raw operator response of a [0,1] mask into [0,1]:
/// 4 for |Laplacian|, 4*sqrt(2) for the Sobel magnitude.
double edge_normalizer(EdgeOperator op) noexcept;

/// Sobel: sqrt(Gx^2 + Gy^2) / (4 sqrt 2). Laplacian: |L * mask| / 4.
/// Both clamped to [0, 1]. Requires a mask of at least 3x3.
EdgeMap extract_edges(const MaskGrid& mask, EdgeOperator op,
                      PaddingMode padding = PaddingMode::Replicate);

std::string_view to_string(EdgeOperator op) noexcept;
/// Accepts "sobel" / "laplacian"; throws ValidationError otherwise.
EdgeOperator parse_edge_operator(std::string_view name);

std::string_view to_string(PaddingMode mode) noexcept;
/// Accepts "zero" / "replicate"; throws ValidationError otherwise.
PaddingMode parse_padding_mode(std::string_view name);

}  // namespace railedge
