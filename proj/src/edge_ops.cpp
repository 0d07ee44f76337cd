#include "railedge/edge_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "railedge/errors.hpp"

namespace railedge {

std::pair<Kernel, Kernel> sobel_kernels() {
  Kernel sx(3, {1, 0, -1,
                2, 0, -2,
                1, 0, -1});
  Kernel sy(3, {1, 2, 1,
                0, 0, 0,
                -1, -2, -1});
  return {std::move(sx), std::move(sy)};
}

Kernel laplacian_kernel() {
  return Kernel(3, {0, 1, 0,
                    1, -4, 1,
                    0, 1, 0});
}

double edge_normalizer(EdgeOperator op) noexcept {
  return op == EdgeOperator::Sobel ? 4.0 * std::numbers::sqrt2 : 4.0;
}

EdgeMap extract_edges(const MaskGrid& mask, EdgeOperator op, PaddingMode padding) {
  if (mask.height() < 3 || mask.width() < 3) {
    throw DimensionError("extract_edges: mask must be at least 3x3");
  }
  const double norm = edge_normalizer(op);

  if (op == EdgeOperator::Laplacian) {
    MaskGrid response = correlate(mask, laplacian_kernel(), padding);
    for (double& v : response.values()) v = std::clamp(std::abs(v) / norm, 0.0, 1.0);
    return {std::move(response), op};
  }

  const auto [sx, sy] = sobel_kernels();
  MaskGrid gx = correlate(mask, sx, padding);
  const MaskGrid gy = correlate(mask, sy, padding);
  auto out = gx.values();
  const auto y = gy.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(std::hypot(out[i], y[i]) / norm, 0.0, 1.0);
  }
  return {std::move(gx), op};
}

std::string_view to_string(EdgeOperator op) noexcept {
  return op == EdgeOperator::Sobel ? "sobel" : "laplacian";
}

EdgeOperator parse_edge_operator(std::string_view name) {
  if (name == "sobel") return EdgeOperator::Sobel;
  if (name == "laplacian") return EdgeOperator::Laplacian;
  throw ValidationError("unknown edge operator '" + std::string(name) +
                        "' (expected sobel or laplacian)");
}

std::string_view to_string(PaddingMode mode) noexcept {
  return mode == PaddingMode::Zero ? "zero" : "replicate";
}

PaddingMode parse_padding_mode(std::string_view name) {
  if (name == "zero") return PaddingMode::Zero;
  if (name == "replicate") return PaddingMode::Replicate;
  throw ValidationError("unknown padding mode '" + std::string(name) +
                        "' (expected zero or replicate)");
}

}  // namespace railedge
