#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "railedge/errors.hpp"
#include "railedge/loss.hpp"

using namespace railedge;

namespace {

double total_at(const std::vector<double>& logits, std::size_t h, std::size_t w,
                const MaskGrid& gt, EdgeOperator op, const LossWeights& weights) {
  return total_loss_and_grad(MaskGrid(h, w, logits), gt, op, weights).breakdown.total;
}

std::vector<double> to_vec(const MaskGrid& g) { return {g.values().begin(), g.values().end()}; }

}  // namespace

TEST_CASE("sigmoid") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(-800.0) == 0.0);
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(2.0) + sigmoid(-2.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double h = 1e-6;
  CHECK((sigmoid(h) - sigmoid(-h)) / (2 * h) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("bce values") {
  CHECK(bce(MaskGrid(3, 3, 0.5), MaskGrid(3, 3, 1.0)) == doctest::Approx(std::numbers::ln2).epsilon(1e-14));
  CHECK(bce(MaskGrid(2, 2, 0.8), MaskGrid(2, 2, 1.0)) == doctest::Approx(-std::log(0.8)).epsilon(1e-14));
  CHECK(bce(MaskGrid(2, 2, 0.2), MaskGrid(2, 2, 0.0)) == doctest::Approx(-std::log(0.8)).epsilon(1e-14));

  MaskGrid t(4, 4);
  t(1, 1) = t(2, 2) = 1.0;
  CHECK(bce(t, t) <= 1e-6);

  // Confident and wrong stays finite thanks to the clamp.
  const double worst = bce(MaskGrid(2, 2, 0.0), MaskGrid(2, 2, 1.0));
  CHECK(std::isfinite(worst));
  CHECK(worst == doctest::Approx(-std::log(kBceEpsilon)).epsilon(1e-12));

  CHECK_THROWS_AS(bce(MaskGrid(2, 2, 1.2), MaskGrid(2, 2, 1.0)), ValidationError);
  CHECK_THROWS_AS(bce(MaskGrid(2, 2, 0.5), MaskGrid(2, 3, 1.0)), ValidationError);
}

TEST_CASE("bce_gradient matches finite differences and vanishes in the clamp") {
  std::mt19937_64 rng(2);
  const MaskGrid p = oracle::random_grid(rng, 4, 5, 0.05, 0.95);
  const MaskGrid t = oracle::random_grid(rng, 4, 5, 0, 1);
  const auto f = [&](const std::vector<double>& x) { return bce(MaskGrid(4, 5, x), t); };
  const auto fd = oracle::finite_difference(f, to_vec(p), 1e-6);
  CHECK(oracle::max_rel_error(to_vec(bce_gradient(p, t)), fd, 1e-6) <= 1e-6);

  const GradGrid g = bce_gradient(MaskGrid(2, 2, 0.0), MaskGrid(2, 2, 1.0));
  CHECK(g.max_value() == 0.0);
  CHECK(g.min_value() == 0.0);
}

TEST_CASE("coupled loss point values") {
  const LossWeights w;
  const LossBreakdown b = coupled_loss(0.5, 4.0, w);
  CHECK(std::abs(b.edge_coupled - 0.5 * std::numbers::e) <= 1e-9);
  CHECK(b.edge_coupled == doctest::Approx(1.359141).epsilon(1e-6));
  CHECK(b.total == doctest::Approx(1.921641).epsilon(1e-6));
  CHECK(b.cls == 0.0);
  CHECK(b.bbox == 0.0);

  const LossBreakdown zero_edge = coupled_loss(0.5, 0.0, w);
  CHECK(zero_edge.edge_coupled == 0.5);
  CHECK(zero_edge.total == 1.0625);

  for (const double le : {0.0, 1.0, 7.5, 100.0}) CHECK(coupled_loss(0.0, le, w).edge_coupled == 0.0);

  CHECK_THROWS_AS(coupled_loss(-0.1, 1.0, w), ValidationError);
  CHECK_THROWS_AS(coupled_loss(0.1, -1.0, w), ValidationError);
  LossWeights bad;
  bad.edge_temperature = 0.0;
  CHECK_THROWS_AS(coupled_loss(0.1, 1.0, bad), ValidationError);
}

TEST_CASE("coupled term is monotone in both arguments") {
  const LossWeights w;
  double prev = -1.0;
  for (double le = 0.0; le <= 10.0; le += 0.25) {
    const double v = coupled_loss(0.3, le, w).edge_coupled;
    CHECK(v > prev);
    prev = v;
  }
  prev = -1.0;
  for (double lm = 0.0; lm <= 2.0; lm += 0.1) {
    const double v = coupled_loss(lm, 1.5, w).total;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("edge_loss_raw") {
  // Matching soft prediction and target edges give a small loss; a constant
  // prediction against an edged target a large one.
  MaskGrid gt(8, 8);
  for (std::size_t r = 2; r < 6; ++r)
    for (std::size_t c = 2; c < 6; ++c) gt(r, c) = 1.0;
  for (const auto op : {EdgeOperator::Sobel, EdgeOperator::Laplacian}) {
    const double same = edge_loss_raw(gt, gt, op);
    const double flat = edge_loss_raw(MaskGrid(8, 8, 0.5), gt, op);
    CHECK(same >= 0.0);
    CHECK(flat > same);
    CHECK(edge_loss_raw(MaskGrid(8, 8, 0.0), MaskGrid(8, 8, 0.0), op) <= 1e-6);
  }
  CHECK_THROWS_AS(edge_loss_raw(MaskGrid(8, 8), MaskGrid(8, 7), EdgeOperator::Sobel),
                  ValidationError);
}

TEST_CASE("total_loss_and_grad matches finite differences on an 8x8 Laplacian instance") {
  std::mt19937_64 rng(8);
  const MaskGrid logits = oracle::random_grid(rng, 8, 8, -3, 3);
  MaskGrid gt(8, 8);
  for (std::size_t r = 1; r < 7; ++r)
    for (std::size_t c = 2; c < 6; ++c) gt(r, c) = 1.0;
  const LossWeights w;
  const auto res = total_loss_and_grad(logits, gt, EdgeOperator::Laplacian, w);
  const auto fd = oracle::finite_difference(
      [&](const std::vector<double>& x) { return total_at(x, 8, 8, gt, EdgeOperator::Laplacian, w); },
      to_vec(logits), 1e-6);
  CHECK(oracle::max_rel_error(to_vec(res.grad), fd, 1e-6) <= 1e-4);
}

TEST_CASE("total_loss_and_grad matches finite differences on random instances") {
  std::mt19937_64 rng(1234);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t h = 3 + rng() % 10;
    const std::size_t w = 3 + rng() % 10;
    const MaskGrid logits = oracle::random_grid(rng, h, w, -4, 4);
    const MaskGrid gt = oracle::random_binary(rng, h, w);
    const auto op = trial % 2 ? EdgeOperator::Sobel : EdgeOperator::Laplacian;
    LossWeights weights;
    weights.edge_enabled = trial % 5 != 0;
    const auto res = total_loss_and_grad(logits, gt, op, weights);
    const auto fd = oracle::finite_difference(
        [&](const std::vector<double>& x) { return total_at(x, h, w, gt, op, weights); },
        to_vec(logits), 1e-6);
    const double err = oracle::max_rel_error(to_vec(res.grad), fd, 1e-6);
    CAPTURE(trial);
    CHECK(err <= 1e-4);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("confident correct prediction has tiny loss and gradient") {
  MaskGrid gt(6, 6, 1.0);
  const auto res = total_loss_and_grad(MaskGrid(6, 6, 20.0), gt, EdgeOperator::Sobel, LossWeights{});
  CHECK(res.breakdown.mask <= 1e-6);
  CHECK(res.breakdown.total <= 1e-5);
  for (double g : res.grad.values()) CHECK(std::abs(g) <= 1e-6);
}

TEST_CASE("extreme logits stay finite") {
  MaskGrid logits(5, 5);
  for (std::size_t i = 0; i < logits.size(); ++i) logits.values()[i] = i % 2 ? 1e6 : -1e6;
  const MaskGrid gt(5, 5, 1.0);
  for (const auto op : {EdgeOperator::Sobel, EdgeOperator::Laplacian}) {
    const auto res = total_loss_and_grad(logits, gt, op, LossWeights{});
    CHECK(std::isfinite(res.breakdown.total));
    CHECK(res.grad.all_finite());
  }
  MaskGrid bad(5, 5);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(total_loss_and_grad(bad, gt, EdgeOperator::Sobel, LossWeights{}), ValidationError);
}

TEST_CASE("baseline reduction: edge term disabled gives w_mask * l_mask") {
  std::mt19937_64 rng(99);
  LossWeights w;
  w.edge_enabled = false;
  for (int trial = 0; trial < 30; ++trial) {
    const MaskGrid logits = oracle::random_grid(rng, 6, 7, -3, 3);
    const MaskGrid gt = oracle::random_binary(rng, 6, 7);
    const auto res = total_loss_and_grad(logits, gt, EdgeOperator::Laplacian, w);
    CHECK(res.breakdown.edge_coupled == 0.0);
    CHECK(std::abs(res.breakdown.total - 1.125 * res.breakdown.mask) <= 1e-12);
    CHECK(std::abs(res.breakdown.mask - bce(sigmoid(logits), gt)) <= 1e-15);
  }
}
