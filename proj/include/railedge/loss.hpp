#pragma once

#include "railedge/edge_ops.hpp"
#include "railedge/grid.hpp"

namespace railedge {

/// Probabilities are clamped to [kBceEpsilon, 1 - kBceEpsilon] before logs.
inline constexpr double kBceEpsilon = 1e-7;
/// Prediction-side Sobel magnitude is sqrt(gx^2 + gy^2 + d^2) - d with this d.
inline constexpr double kSobelSmoothing = 1e-8;

struct LossWeights {
  double w_cls = 1.0;
  double w_bbox = 1.0;
  double w_mask = 1.125;
  /// Divisor inside the exponent of the coupled edge term.
  double edge_temperature = 4.0;
  /// When false the coupled edge term is dropped and total = w_mask * l_mask
  /// (plus the carried cls/bbox terms).
  bool edge_enabled = true;

  void validate() const;
};

/// The four weighted terms of the detector loss. cls and bbox are carried as
/// zero constants; this library only models the mask head.
struct LossBreakdown {
  double cls = 0.0;
  double bbox = 0.0;
  double mask = 0.0;
  double edge_raw = 0.0;
  double edge_coupled = 0.0;
  double total = 0.0;

  LossBreakdown& operator+=(const LossBreakdown& other) noexcept;
  friend bool operator==(const LossBreakdown&, const LossBreakdown&) = default;
};

/// Partial derivatives of a scalar loss with respect to every pixel of a grid.
using GradGrid = MaskGrid;

double sigmoid(double z) noexcept;
MaskGrid sigmoid(const MaskGrid& logits);

/// Mean binary cross-entropy, prediction clamped to [eps, 1 - eps].
double bce(const MaskGrid& prediction, const MaskGrid& target);

/// d bce / d prediction. Zero wherever the prediction sits in the clamp.
GradGrid bce_gradient(const MaskGrid& prediction, const MaskGrid& target);

/// Edge map of a predicted mask as used on the loss side (Sobel magnitude
/// smoothed at zero, see kSobelSmoothing).
MaskGrid prediction_edges(const MaskGrid& pred_mask, EdgeOperator op, PaddingMode padding);

/// bce(prediction_edges(pred_mask), extract_edges(gt_mask)).
double edge_loss_raw(const MaskGrid& pred_mask, const MaskGrid& gt_mask, EdgeOperator op,
                     PaddingMode padding = PaddingMode::Replicate);

/// Builds the breakdown: edge_coupled = l_mask * exp(l_edge_raw / T) and
/// total = w_cls*cls + w_bbox*bbox + w_mask*l_mask + edge_coupled.
LossBreakdown coupled_loss(double l_mask, double l_edge_raw, const LossWeights& weights);

struct LossAndGrad {
  LossBreakdown breakdown;
  GradGrid grad;  ///< d total / d logit
};

/// Full forward/backward for one instance. The mask term compares
/// sigmoid(logits) with `gt_mask`; the edge term compares edge maps of the
/// prediction and of `gt_mask`.
LossAndGrad total_loss_and_grad(const MaskGrid& pred_logits, const MaskGrid& gt_mask,
                                EdgeOperator op, const LossWeights& weights,
                                PaddingMode padding = PaddingMode::Replicate);

/// Same as above with the ground-truth edge map supplied by the caller, so a
/// training loop can precompute it (and take it from a different mask than
/// the mask target).
LossAndGrad total_loss_and_grad(const MaskGrid& pred_logits, const MaskGrid& mask_target,
                                const MaskGrid& edge_target, EdgeOperator op,
                                const LossWeights& weights,
                                PaddingMode padding = PaddingMode::Replicate);

}  // namespace railedge
