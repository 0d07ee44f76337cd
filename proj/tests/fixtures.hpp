// Shared random geometry for tests and the acceptance suite.
#pragma once

#include <random>

#include "railedge/gt_pipeline.hpp"

namespace fixtures {

/// Rail-like trapezoid inside an 800x800 frame: narrow top, wide bottom,
/// random skew of the top edge.
inline railedge::Trapezoid random_rail(std::mt19937_64& rng) {
  // Top 53 bits of each draw, so the geometry is the same on every platform.
  const auto in = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  const double r0 = in(60, 300);
  const double r1 = in(650, 790);
  const double c = in(300, 500);
  const double wt = in(30, 120);
  const double wb = in(250, 600);
  const double sk = in(-150, 150);
  railedge::Trapezoid t;
  t.top = {c + sk - wt / 2, c + sk + wt / 2};
  t.top_row = r0;
  t.bottom = {c - wb / 2, c + wb / 2};
  t.bottom_row = r1;
  return t;
}

}  // namespace fixtures
