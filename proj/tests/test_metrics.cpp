#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "railedge/errors.hpp"
#include "railedge/gt_pipeline.hpp"
#include "railedge/metrics.hpp"

using namespace railedge;

namespace {

MaskGrid rect(std::size_t h, std::size_t w, std::size_t r0, std::size_t r1, std::size_t c0,
              std::size_t c1) {
  MaskGrid g(h, w);
  for (std::size_t r = r0; r < r1; ++r)
    for (std::size_t c = c0; c < c1; ++c) g(r, c) = 1.0;
  return g;
}

MaskGrid complement(const MaskGrid& g) {
  MaskGrid out = g;
  for (double& v : out.values()) v = 1.0 - v;
  return out;
}

}  // namespace

TEST_CASE("iou") {
  const MaskGrid a = rect(10, 10, 0, 10, 0, 4);
  const MaskGrid b = rect(10, 10, 0, 10, 2, 6);
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, b) == doctest::Approx(20.0 / 60.0).epsilon(1e-15));
  CHECK(iou(a, MaskGrid(10, 10)) == 0.0);
  CHECK(iou(MaskGrid(4, 4), MaskGrid(4, 4, 0.2)) == 1.0);
  // soft values binarize at 0.5
  CHECK(iou(MaskGrid(4, 4, 0.5), MaskGrid(4, 4, 1.0)) == 1.0);
  CHECK_THROWS_AS(iou(a, MaskGrid(10, 9)), ValidationError);
}

TEST_CASE("boundary_pixels is a two-sided band") {
  const MaskGrid g = rect(6, 6, 0, 6, 0, 3);
  const auto band = boundary_pixels(g);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c) CHECK(band[r * 6 + c] == (c == 2 || c == 3));
}

TEST_CASE("boundary_f1") {
  const Trapezoid t{{80, 110}, 20, {40, 160}, 180};
  const MaskGrid m = rasterize_trapezoid(t, {200, 200});
  CHECK(boundary_f1(m, m) == 1.0);

  MaskGrid shifted(200, 200);
  for (std::size_t r = 0; r < 200; ++r)
    for (std::size_t c = 1; c < 200; ++c) shifted(r, c) = m(r, c - 1);
  CHECK(boundary_f1(m, shifted, 2) == 1.0);
  CHECK(boundary_f1(m, shifted, 0) < 1.0);

  CHECK(boundary_f1(m, MaskGrid(200, 200)) == 0.0);
  CHECK(boundary_f1(MaskGrid(200, 200), m) == 0.0);
  CHECK(boundary_f1(MaskGrid(5, 5), MaskGrid(5, 5, 1.0)) == 1.0);

  const MaskGrid far = rect(200, 200, 10, 20, 10, 20);
  CHECK(boundary_f1(m, far) == 0.0);
}

TEST_CASE("boundary_f1 is symmetric and bounded") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const MaskGrid a = oracle::random_grid(rng, 12, 14, 0, 1);
    const MaskGrid b = oracle::random_grid(rng, 12, 14, 0, 1);
    for (const std::size_t d : {0u, 1u, 2u}) {
      const double ab = boundary_f1(a, b, d);
      CHECK(ab == boundary_f1(b, a, d));
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0);
    }
  }
}

TEST_CASE("jaggedness basics") {
  CHECK(jaggedness(MaskGrid(8, 8, 1.0)) == 0.0);
  CHECK(jaggedness(MaskGrid(8, 8, 0.3)) == 0.0);
  CHECK_THROWS_AS(jaggedness(MaskGrid(2, 9)), DimensionError);

  const MaskGrid r = rect(40, 40, 10, 30, 8, 33);
  const MaskGrid soft = box_filter(r, 3, PaddingMode::Replicate);
  CHECK(jaggedness(r) > 0.0);
  CHECK(jaggedness(soft) < jaggedness(r));
}

TEST_CASE("jaggedness: staircase diagonal versus antialiased diagonal") {
  // Half-plane below the line y = 0.5 x, rendered by centre sampling and by
  // 8x supersampling then bilinear downscale.
  const std::size_t n = 64;
  MaskGrid stairs(n, n);
  MaskGrid fine(8 * n, 8 * n);
  for (std::size_t r = 0; r < 8 * n; ++r)
    for (std::size_t c = 0; c < 8 * n; ++c) fine(r, c) = (r + 0.5) > 0.5 * (c + 0.5) ? 1.0 : 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) stairs(r, c) = (r + 0.5) > 0.5 * (c + 0.5) ? 1.0 : 0.0;
  const MaskGrid smooth = box_filter(resize_bilinear(fine, n, n), 3, PaddingMode::Replicate);
  CHECK(jaggedness(stairs) > jaggedness(smooth));
}

TEST_CASE("jaggedness is invariant under complement") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const MaskGrid m =
        resize_bilinear(rasterize_trapezoid(fixtures::random_rail(rng), {800, 800}), 200, 200);
    CHECK(jaggedness(m) == doctest::Approx(jaggedness(complement(m))).epsilon(1e-12));
    const MaskGrid noisy = oracle::random_grid(rng, 9, 9, 0, 1);
    CHECK(jaggedness(noisy) == doctest::Approx(jaggedness(complement(noisy))).epsilon(1e-12));
  }
}
