// Brute-force reference implementations used only by the tests. They are
// written from the textbook definitions and share no code with src/.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "railedge/grid.hpp"

namespace oracle {

using railedge::MaskGrid;
using railedge::PaddingMode;

/// Explicitly padded copy of `in` with `pad` extra pixels on every side.
inline std::vector<std::vector<double>> padded(const MaskGrid& in, int pad, PaddingMode mode) {
  const int h = static_cast<int>(in.height());
  const int w = static_cast<int>(in.width());
  std::vector<std::vector<double>> out(h + 2 * pad, std::vector<double>(w + 2 * pad, 0.0));
  for (int r = -pad; r < h + pad; ++r) {
    for (int c = -pad; c < w + pad; ++c) {
      double v = 0.0;
      if (r >= 0 && r < h && c >= 0 && c < w) {
        v = in(r, c);
      } else if (mode == PaddingMode::Replicate) {
        const int rr = r < 0 ? 0 : (r >= h ? h - 1 : r);
        const int cc = c < 0 ? 0 : (c >= w ? w - 1 : c);
        v = in(rr, cc);
      }
      out[r + pad][c + pad] = v;
    }
  }
  return out;
}

/// Quadruple-loop cross-correlation over an explicitly padded image.
inline MaskGrid correlate(const MaskGrid& in, const std::vector<std::vector<double>>& kernel,
                          PaddingMode mode) {
  const int k = static_cast<int>(kernel.size());
  const int rad = k / 2;
  const auto p = padded(in, rad, mode);
  MaskGrid out(in.height(), in.width());
  for (std::size_t r = 0; r < in.height(); ++r) {
    for (std::size_t c = 0; c < in.width(); ++c) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) acc += kernel[i][j] * p[r + i][c + j];
      }
      out(r, c) = acc;
    }
  }
  return out;
}

/// Plain window average (sum / m^2).
inline MaskGrid box_mean(const MaskGrid& in, int m, PaddingMode mode) {
  std::vector<std::vector<double>> kernel(m, std::vector<double>(m, 1.0));
  MaskGrid sums = correlate(in, kernel, mode);
  for (double& v : sums.values()) v /= static_cast<double>(m * m);
  return sums;
}

/// Bilinear resize in the four-weight form, half-pixel centres.
inline MaskGrid bilinear(const MaskGrid& in, std::size_t oh, std::size_t ow) {
  MaskGrid out(oh, ow);
  const double ih = static_cast<double>(in.height());
  const double iw = static_cast<double>(in.width());
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double y = (r + 0.5) * ih / static_cast<double>(oh) - 0.5;
      double x = (c + 0.5) * iw / static_cast<double>(ow) - 0.5;
      y = std::fmin(std::fmax(y, 0.0), ih - 1);
      x = std::fmin(std::fmax(x, 0.0), iw - 1);
      const int y0 = static_cast<int>(y);
      const int x0 = static_cast<int>(x);
      const int y1 = std::min(y0 + 1, static_cast<int>(ih) - 1);
      const int x1 = std::min(x0 + 1, static_cast<int>(iw) - 1);
      const double fy = y - y0;
      const double fx = x - x0;
      out(r, c) = in(y0, x0) * (1 - fy) * (1 - fx) + in(y0, x1) * (1 - fy) * fx +
                  in(y1, x0) * fy * (1 - fx) + in(y1, x1) * fy * fx;
    }
  }
  return out;
}

/// Central finite difference of f along every coordinate of `x`.
inline std::vector<double> finite_difference(const std::function<double(const std::vector<double>&)>& f,
                                             std::vector<double> x, double h) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = f(x);
    x[i] = orig - h;
    const double down = f(x);
    x[i] = orig;
    grad[i] = (up - down) / (2 * h);
  }
  return grad;
}

inline MaskGrid random_grid(std::mt19937_64& rng, std::size_t h, std::size_t w, double lo,
                            double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  MaskGrid g(h, w);
  for (double& v : g.values()) v = dist(rng);
  return g;
}

inline MaskGrid random_binary(std::mt19937_64& rng, std::size_t h, std::size_t w, double p = 0.5) {
  std::bernoulli_distribution dist(p);
  MaskGrid g(h, w);
  for (double& v : g.values()) v = dist(rng) ? 1.0 : 0.0;
  return g;
}

inline double max_abs_diff(const MaskGrid& a, const MaskGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::fmax(m, std::fabs(a.values()[i] - b.values()[i]));
  return m;
}

/// max_i |a_i - b_i| / max(|b_i|, floor)
inline double max_rel_error(const std::vector<double>& analytic, const std::vector<double>& numeric,
                            double abs_floor) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom = std::fmax(std::fmax(std::fabs(analytic[i]), std::fabs(numeric[i])), abs_floor);
    worst = std::fmax(worst, std::fabs(analytic[i] - numeric[i]) / denom);
  }
  return worst;
}

}  // namespace oracle
