#include "railedge/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "railedge/errors.hpp"

namespace railedge {

namespace {

std::string shape_str(std::size_t h, std::size_t w) {
  return std::to_string(h) + "x" + std::to_string(w);
}

void require_finite(const MaskGrid& g, const char* what) {
  if (!g.all_finite()) {
    throw ValidationError(std::string(what) + ": grid contains non-finite values");
  }
}

void require_fits(const MaskGrid& g, std::size_t k, const char* what) {
  if (k > std::min(g.height(), g.width())) {
    throw DimensionError(std::string(what) + ": kernel size " + std::to_string(k) +
                         " exceeds grid " + shape_str(g.height(), g.width()));
  }
}

// Maps a possibly out-of-range coordinate onto the grid. Returns -1 when the
// read falls into zero padding.
struct Tap {
  std::ptrdiff_t offset;
  double coef;
};

// Non-zero kernel taps as flat offsets into a row-major grid of width w.
std::vector<Tap> nonzero_taps(const Kernel& kernel, std::ptrdiff_t w) {
  const auto k = static_cast<std::ptrdiff_t>(kernel.size());
  const auto coef = kernel.coefficients();
  std::vector<Tap> taps;
  for (std::ptrdiff_t i = 0; i < k; ++i) {
    for (std::ptrdiff_t j = 0; j < k; ++j) {
      if (coef[i * k + j] != 0.0) taps.push_back({i * w + j, coef[i * k + j]});
    }
  }
  return taps;
}

inline std::ptrdiff_t resolve(std::ptrdiff_t x, std::ptrdiff_t n, PaddingMode padding) {
  if (x >= 0 && x < n) return x;
  if (padding == PaddingMode::Zero) return -1;
  return std::clamp<std::ptrdiff_t>(x, 0, n - 1);
}

}  // namespace

MaskGrid::MaskGrid(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), values_(height * width, fill) {
  if (height == 0 || width == 0) {
    throw DimensionError("MaskGrid: dimensions must be positive, got " + shape_str(height, width));
  }
}

MaskGrid::MaskGrid(std::size_t height, std::size_t width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  if (height == 0 || width == 0) {
    throw DimensionError("MaskGrid: dimensions must be positive, got " + shape_str(height, width));
  }
  if (values_.size() != height * width) {
    throw DimensionError("MaskGrid: " + std::to_string(values_.size()) +
                         " values for shape " + shape_str(height, width));
  }
}

bool MaskGrid::is_binary() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0 || v == 1.0; });
}

bool MaskGrid::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double MaskGrid::min_value() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

double MaskGrid::max_value() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

Kernel::Kernel(std::size_t size, std::vector<double> coefficients)
    : size_(size), coefficients_(std::move(coefficients)) {
  if (size == 0 || size % 2 == 0) {
    throw ValidationError("Kernel: size must be odd and positive, got " + std::to_string(size));
  }
  if (coefficients_.size() != size * size) {
    throw DimensionError("Kernel: expected " + std::to_string(size * size) +
                         " coefficients, got " + std::to_string(coefficients_.size()));
  }
  if (!std::all_of(coefficients_.begin(), coefficients_.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw ValidationError("Kernel: coefficients must be finite");
  }
}

Kernel Kernel::box(std::size_t m) {
  if (m == 0 || m % 2 == 0) {
    throw ValidationError("box kernel: size must be odd and positive, got " + std::to_string(m));
  }
  return Kernel(m, std::vector<double>(m * m, 1.0 / static_cast<double>(m * m)));
}

double Kernel::sum() const noexcept {
  return std::accumulate(coefficients_.begin(), coefficients_.end(), 0.0);
}

Kernel Kernel::rotated_180() const {
  return Kernel(size_, std::vector<double>(coefficients_.rbegin(), coefficients_.rend()));
}

MaskGrid correlate(const MaskGrid& input, const Kernel& kernel, PaddingMode padding) {
  require_fits(input, kernel.size(), "correlate");
  require_finite(input, "correlate");

  const auto h = static_cast<std::ptrdiff_t>(input.height());
  const auto w = static_cast<std::ptrdiff_t>(input.width());
  const auto k = static_cast<std::ptrdiff_t>(kernel.size());
  const auto rad = static_cast<std::ptrdiff_t>(kernel.radius());
  const auto in = input.values();
  const auto coef = kernel.coefficients();

  const auto taps = nonzero_taps(kernel, w);

  MaskGrid out(input.height(), input.width());
  auto dst = out.values();

  for (std::ptrdiff_t r = 0; r < h; ++r) {
    const bool row_inside = r >= rad && r + rad < h;
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      double acc = 0.0;
      if (row_inside && c >= rad && c + rad < w) {
        const double* base = in.data() + (r - rad) * w + (c - rad);
        for (const Tap& tap : taps) acc += tap.coef * base[tap.offset];
      } else {
        for (std::ptrdiff_t i = 0; i < k; ++i) {
          const auto sr = resolve(r + i - rad, h, padding);
          if (sr < 0) continue;
          for (std::ptrdiff_t j = 0; j < k; ++j) {
            const auto sc = resolve(c + j - rad, w, padding);
            if (sc < 0) continue;
            acc += coef[i * k + j] * in[sr * w + sc];
          }
        }
      }
      dst[r * w + c] = acc;
    }
  }
  return out;
}

MaskGrid correlate_adjoint(const MaskGrid& grad_output, const Kernel& kernel,
                           PaddingMode padding) {
  require_fits(grad_output, kernel.size(), "correlate_adjoint");

  const auto h = static_cast<std::ptrdiff_t>(grad_output.height());
  const auto w = static_cast<std::ptrdiff_t>(grad_output.width());
  const auto k = static_cast<std::ptrdiff_t>(kernel.size());
  const auto rad = static_cast<std::ptrdiff_t>(kernel.radius());
  const auto g = grad_output.values();
  const auto coef = kernel.coefficients();

  const auto taps = nonzero_taps(kernel, w);

  MaskGrid out(grad_output.height(), grad_output.width());
  auto dst = out.values();

  // Scatter form: every forward read in(sr, sc) * K(i, j) contributes
  // K(i, j) * g(r, c) back to (sr, sc).
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    const bool row_inside = r >= rad && r + rad < h;
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      const double gv = g[r * w + c];
      if (gv == 0.0) continue;
      if (row_inside && c >= rad && c + rad < w) {
        double* base = dst.data() + (r - rad) * w + (c - rad);
        for (const Tap& tap : taps) base[tap.offset] += tap.coef * gv;
      } else {
        for (std::ptrdiff_t i = 0; i < k; ++i) {
          const auto sr = resolve(r + i - rad, h, padding);
          if (sr < 0) continue;
          for (std::ptrdiff_t j = 0; j < k; ++j) {
            const auto sc = resolve(c + j - rad, w, padding);
            if (sc < 0) continue;
            dst[sr * w + sc] += coef[i * k + j] * gv;
          }
        }
      }
    }
  }
  return out;
}

MaskGrid resize_bilinear(const MaskGrid& input, std::size_t out_height, std::size_t out_width) {
  if (out_height == 0 || out_width == 0) {
    throw ValidationError("resize_bilinear: output dimensions must be positive, got " +
                          shape_str(out_height, out_width));
  }
  require_finite(input, "resize_bilinear");

  const std::size_t ih = input.height();
  const std::size_t iw = input.width();
  const double sy = static_cast<double>(ih) / static_cast<double>(out_height);
  const double sx = static_cast<double>(iw) / static_cast<double>(out_width);

  struct Tap {
    std::size_t lo;
    std::size_t hi;
    double t;
  };
  auto taps = [](std::size_t n_out, std::size_t n_in, double scale) {
    std::vector<Tap> result(n_out);
    const double max_src = static_cast<double>(n_in - 1);
    for (std::size_t d = 0; d < n_out; ++d) {
      const double src =
          std::clamp((static_cast<double>(d) + 0.5) * scale - 0.5, 0.0, max_src);
      const auto lo = static_cast<std::size_t>(std::floor(src));
      const std::size_t hi = std::min(lo + 1, n_in - 1);
      result[d] = {lo, hi, src - static_cast<double>(lo)};
    }
    return result;
  };
  const auto ytaps = taps(out_height, ih, sy);
  const auto xtaps = taps(out_width, iw, sx);

  // std::lerp is exact at the endpoints and returns a for lerp(a, a, t), so
  // constants and same-size resizes are reproduced bit-for-bit.
  MaskGrid out(out_height, out_width);
  for (std::size_t r = 0; r < out_height; ++r) {
    const auto& ty = ytaps[r];
    for (std::size_t c = 0; c < out_width; ++c) {
      const auto& tx = xtaps[c];
      const double top = std::lerp(input(ty.lo, tx.lo), input(ty.lo, tx.hi), tx.t);
      const double bottom = std::lerp(input(ty.hi, tx.lo), input(ty.hi, tx.hi), tx.t);
      out(r, c) = std::lerp(top, bottom, ty.t);
    }
  }
  return out;
}

MaskGrid box_filter(const MaskGrid& input, std::size_t m, PaddingMode padding) {
  if (m == 0 || m % 2 == 0) {
    throw ValidationError("box_filter: size must be odd and positive, got " + std::to_string(m));
  }
  require_fits(input, m, "box_filter");
  require_finite(input, "box_filter");

  const auto h = static_cast<std::ptrdiff_t>(input.height());
  const auto w = static_cast<std::ptrdiff_t>(input.width());
  const auto rad = static_cast<std::ptrdiff_t>(m / 2);
  const double inv_area = 1.0 / static_cast<double>(m * m);

  MaskGrid out(input.height(), input.width());
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      const double centre = input(r, c);
      double dev = 0.0;
      double lo = centre;
      double hi = centre;
      for (std::ptrdiff_t i = -rad; i <= rad; ++i) {
        const auto sr = resolve(r + i, h, padding);
        for (std::ptrdiff_t j = -rad; j <= rad; ++j) {
          const auto sc = resolve(c + j, w, padding);
          const double v = (sr < 0 || sc < 0) ? 0.0 : input(sr, sc);
          dev += v - centre;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      out(r, c) = std::clamp(centre + dev * inv_area, lo, hi);
    }
  }
  return out;
}

}  // namespace railedge
