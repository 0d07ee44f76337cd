#include "railedge/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "railedge/errors.hpp"

namespace railedge {

namespace {

void require_same_shape(const MaskGrid& a, const MaskGrid& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ValidationError(std::string(what) + ": shape mismatch " + std::to_string(a.height()) +
                          "x" + std::to_string(a.width()) + " vs " +
                          std::to_string(b.height()) + "x" + std::to_string(b.width()));
  }
}

void require_unit_range(const MaskGrid& g, const char* what) {
  for (double v : g.values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError(std::string(what) + ": values must lie in [0, 1]");
    }
  }
}

inline double clamp_prob(double p) { return std::clamp(p, kBceEpsilon, 1.0 - kBceEpsilon); }

// Forward state of the prediction-side edge branch, kept for the backward pass.
struct EdgeForward {
  MaskGrid edges;
  MaskGrid gx;  // Laplacian response, or Sobel x response
  MaskGrid gy;  // Sobel y response (unused for Laplacian)
};

EdgeForward edge_forward(const MaskGrid& pred, EdgeOperator op, PaddingMode padding) {
  if (pred.height() < 3 || pred.width() < 3) {
    throw DimensionError("edge loss: mask must be at least 3x3");
  }
  const double norm = edge_normalizer(op);
  if (op == EdgeOperator::Laplacian) {
    MaskGrid r = correlate(pred, laplacian_kernel(), padding);
    MaskGrid e(pred.height(), pred.width());
    auto ev = e.values();
    const auto rv = r.values();
    for (std::size_t i = 0; i < ev.size(); ++i) ev[i] = std::min(std::abs(rv[i]) / norm, 1.0);
    return {std::move(e), std::move(r), MaskGrid(1, 1)};
  }
  const auto [sx, sy] = sobel_kernels();
  MaskGrid gx = correlate(pred, sx, padding);
  MaskGrid gy = correlate(pred, sy, padding);
  MaskGrid e(pred.height(), pred.width());
  auto ev = e.values();
  const auto xv = gx.values();
  const auto yv = gy.values();
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const double mag =
        std::sqrt(xv[i] * xv[i] + yv[i] * yv[i] + kSobelSmoothing * kSobelSmoothing) -
        kSobelSmoothing;
    ev[i] = std::clamp(mag / norm, 0.0, 1.0);
  }
  return {std::move(e), std::move(gx), std::move(gy)};
}

// d loss / d pred given d loss / d edges.
MaskGrid edge_backward(const EdgeForward& fwd, const MaskGrid& grad_edges, EdgeOperator op,
                       PaddingMode padding) {
  const double norm = edge_normalizer(op);
  const auto ge = grad_edges.values();
  const auto ev = fwd.edges.values();

  if (op == EdgeOperator::Laplacian) {
    MaskGrid grad_r(grad_edges.height(), grad_edges.width());
    auto gr = grad_r.values();
    const auto rv = fwd.gx.values();
    for (std::size_t i = 0; i < gr.size(); ++i) {
      if (ev[i] >= 1.0 || rv[i] == 0.0) continue;  // clamp or kink of |r|
      gr[i] = ge[i] * (rv[i] > 0.0 ? 1.0 : -1.0) / norm;
    }
    return correlate_adjoint(grad_r, laplacian_kernel(), padding);
  }

  MaskGrid grad_x(grad_edges.height(), grad_edges.width());
  MaskGrid grad_y(grad_edges.height(), grad_edges.width());
  auto gxv = grad_x.values();
  auto gyv = grad_y.values();
  const auto xv = fwd.gx.values();
  const auto yv = fwd.gy.values();
  for (std::size_t i = 0; i < gxv.size(); ++i) {
    if (ev[i] >= 1.0) continue;
    // d/dx (sqrt(x^2 + y^2 + d^2) - d) = x / sqrt(x^2 + y^2 + d^2)
    const double root = std::sqrt(xv[i] * xv[i] + yv[i] * yv[i] + kSobelSmoothing * kSobelSmoothing);
    const double scale = ge[i] / (norm * root);
    gxv[i] = scale * xv[i];
    gyv[i] = scale * yv[i];
  }
  const auto [sx, sy] = sobel_kernels();
  MaskGrid grad = correlate_adjoint(grad_x, sx, padding);
  const MaskGrid grad_from_y = correlate_adjoint(grad_y, sy, padding);
  auto gv = grad.values();
  const auto gyp = grad_from_y.values();
  for (std::size_t i = 0; i < gv.size(); ++i) gv[i] += gyp[i];
  return grad;
}

}  // namespace

void LossWeights::validate() const {
  if (!(w_cls >= 0.0 && w_bbox >= 0.0 && w_mask >= 0.0) || !std::isfinite(w_cls) ||
      !std::isfinite(w_bbox) || !std::isfinite(w_mask)) {
    throw ValidationError("LossWeights: weights must be finite and non-negative");
  }
  if (!(edge_temperature > 0.0) || !std::isfinite(edge_temperature)) {
    throw ValidationError("LossWeights: edge_temperature must be positive");
  }
}

LossBreakdown& LossBreakdown::operator+=(const LossBreakdown& other) noexcept {
  cls += other.cls;
  bbox += other.bbox;
  mask += other.mask;
  edge_raw += other.edge_raw;
  edge_coupled += other.edge_coupled;
  total += other.total;
  return *this;
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

MaskGrid sigmoid(const MaskGrid& logits) {
  MaskGrid out = logits;
  for (double& v : out.values()) v = sigmoid(v);
  return out;
}

double bce(const MaskGrid& prediction, const MaskGrid& target) {
  require_same_shape(prediction, target, "bce");
  require_unit_range(prediction, "bce prediction");
  require_unit_range(target, "bce target");
  const auto p = prediction.values();
  const auto t = target.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = clamp_prob(p[i]);
    // Binary targets need only one of the two log terms.
    if (t[i] == 0.0) {
      sum -= std::log1p(-q);
    } else if (t[i] == 1.0) {
      sum -= std::log(q);
    } else {
      sum -= t[i] * std::log(q) + (1.0 - t[i]) * std::log1p(-q);
    }
  }
  return sum / static_cast<double>(p.size());
}

GradGrid bce_gradient(const MaskGrid& prediction, const MaskGrid& target) {
  require_same_shape(prediction, target, "bce_gradient");
  const auto p = prediction.values();
  const auto t = target.values();
  const double inv_n = 1.0 / static_cast<double>(p.size());
  GradGrid grad(prediction.height(), prediction.width());
  auto g = grad.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= kBceEpsilon || p[i] >= 1.0 - kBceEpsilon) continue;
    g[i] = (-t[i] / p[i] + (1.0 - t[i]) / (1.0 - p[i])) * inv_n;
  }
  return grad;
}

MaskGrid prediction_edges(const MaskGrid& pred_mask, EdgeOperator op, PaddingMode padding) {
  return edge_forward(pred_mask, op, padding).edges;
}

double edge_loss_raw(const MaskGrid& pred_mask, const MaskGrid& gt_mask, EdgeOperator op,
                     PaddingMode padding) {
  require_same_shape(pred_mask, gt_mask, "edge_loss_raw");
  return bce(prediction_edges(pred_mask, op, padding), extract_edges(gt_mask, op, padding).grid);
}

LossBreakdown coupled_loss(double l_mask, double l_edge_raw, const LossWeights& weights) {
  weights.validate();
  if (!(l_mask >= 0.0) || !(l_edge_raw >= 0.0) || !std::isfinite(l_mask) ||
      !std::isfinite(l_edge_raw)) {
    throw ValidationError("coupled_loss: loss terms must be finite and non-negative");
  }
  LossBreakdown b;
  b.mask = l_mask;
  b.edge_raw = l_edge_raw;
  b.edge_coupled =
      weights.edge_enabled ? l_mask * std::exp(l_edge_raw / weights.edge_temperature) : 0.0;
  b.total = weights.w_cls * b.cls + weights.w_bbox * b.bbox + weights.w_mask * b.mask +
            b.edge_coupled;
  return b;
}

LossAndGrad total_loss_and_grad(const MaskGrid& pred_logits, const MaskGrid& gt_mask,
                                EdgeOperator op, const LossWeights& weights,
                                PaddingMode padding) {
  require_same_shape(pred_logits, gt_mask, "total_loss_and_grad");
  return total_loss_and_grad(pred_logits, gt_mask, extract_edges(gt_mask, op, padding).grid, op,
                             weights, padding);
}

LossAndGrad total_loss_and_grad(const MaskGrid& pred_logits, const MaskGrid& mask_target,
                                const MaskGrid& edge_target, EdgeOperator op,
                                const LossWeights& weights, PaddingMode padding) {
  require_same_shape(pred_logits, mask_target, "total_loss_and_grad");
  require_same_shape(pred_logits, edge_target, "total_loss_and_grad");
  if (!pred_logits.all_finite()) {
    throw ValidationError("total_loss_and_grad: logits must be finite");
  }
  weights.validate();

  const MaskGrid prob = sigmoid(pred_logits);
  const double l_mask = bce(prob, mask_target);
  const EdgeForward fwd = edge_forward(prob, op, padding);
  const double l_edge = bce(fwd.edges, edge_target);
  LossBreakdown breakdown = coupled_loss(l_mask, l_edge, weights);

  // d total / d prob
  GradGrid grad = bce_gradient(prob, mask_target);
  auto g = grad.values();
  if (weights.edge_enabled) {
    const double coupling = std::exp(l_edge / weights.edge_temperature);
    const double mask_scale = weights.w_mask + coupling;
    const double edge_scale = l_mask / weights.edge_temperature * coupling;
    for (double& v : g) v *= mask_scale;
    if (edge_scale != 0.0) {
      const MaskGrid from_edges =
          edge_backward(fwd, bce_gradient(fwd.edges, edge_target), op, padding);
      const auto ge = from_edges.values();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += edge_scale * ge[i];
    }
  } else {
    for (double& v : g) v *= weights.w_mask;
  }

  // through the sigmoid
  const auto p = prob.values();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= p[i] * (1.0 - p[i]);

  return {breakdown, std::move(grad)};
}

}  // namespace railedge
