#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace railedge {

/// Dense row-major 2D grid of doubles. Masks, probabilities, edge maps,
/// prototypes and gradients all share this type.
class MaskGrid {
 public:
  MaskGrid(std::size_t height, std::size_t width, double fill = 0.0);
  MaskGrid(std::size_t height, std::size_t width, std::vector<double> values);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(std::size_t row, std::size_t col) noexcept {
    return values_[row * width_ + col];
  }
  double operator()(std::size_t row, std::size_t col) const noexcept {
    return values_[row * width_ + col];
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const MaskGrid& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  /// True when every value is exactly 0.0 or 1.0.
  bool is_binary() const noexcept;
  bool all_finite() const noexcept;
  double min_value() const noexcept;
  double max_value() const noexcept;

  friend bool operator==(const MaskGrid&, const MaskGrid&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> values_;
};

/// Square odd-sized kernel of fixed coefficients, applied by cross-correlation.
class Kernel {
 public:
  Kernel(std::size_t size, std::vector<double> coefficients);

  /// m x m kernel with every coefficient equal to 1/m^2.
  static Kernel box(std::size_t m);

  std::size_t size() const noexcept { return size_; }
  std::size_t radius() const noexcept { return size_ / 2; }
  double operator()(std::size_t row, std::size_t col) const noexcept {
    return coefficients_[row * size_ + col];
  }
  std::span<const double> coefficients() const noexcept { return coefficients_; }

  double sum() const noexcept;
  Kernel rotated_180() const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  std::size_t size_;
  std::vector<double> coefficients_;
};

enum class PaddingMode { Zero, Replicate };

/// "Same"-size cross-correlation (no kernel flip):
///   out(r, c) = sum_{i,j} K(i, j) * in(r + i - radius, c + j - radius)
/// with out-of-range reads resolved by `padding`.
MaskGrid correlate(const MaskGrid& input, const Kernel& kernel,
                   PaddingMode padding = PaddingMode::Replicate);

/// Adjoint of `correlate` with respect to its input: given dL/d(out),
/// returns dL/d(in). Interior contributions are a correlation with the
/// 180-degree rotated kernel; reads that were padded either vanish (Zero)
/// or accumulate onto the replicated border pixel (Replicate).
MaskGrid correlate_adjoint(const MaskGrid& grad_output, const Kernel& kernel,
                           PaddingMode padding = PaddingMode::Replicate);

/// Bilinear resize with half-pixel-centre alignment:
///   src = (dst + 0.5) * (in / out) - 0.5, clamped to [0, in - 1].
MaskGrid resize_bilinear(const MaskGrid& input, std::size_t out_height,
                         std::size_t out_width);

/// m x m normalized box filter (m odd). Agrees with
/// correlate(input, Kernel::box(m), padding) to rounding, but computes each
/// window as centre + mean(window - centre) clamped to the window range, so
/// constant neighbourhoods come out bit-identical.
MaskGrid box_filter(const MaskGrid& input, std::size_t m,
                    PaddingMode padding = PaddingMode::Replicate);

}  // namespace railedge
