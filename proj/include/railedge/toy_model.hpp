#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "railedge/edge_ops.hpp"
#include "railedge/gt_pipeline.hpp"
#include "railedge/grid.hpp"
#include "railedge/loss.hpp"

namespace railedge {

/// Prototype-assembly mask head: instance n has logits
///   z_n = sum_i coefficients[n][i] * prototypes[i]
/// and mask sigmoid(z_n). Prototypes are shared; coefficients are free
/// per-instance parameters.
struct PrototypeModel {
  std::vector<MaskGrid> prototypes;
  std::vector<std::vector<double>> coefficients;

  std::size_t k() const noexcept { return prototypes.size(); }
  std::size_t instances() const noexcept { return coefficients.size(); }

  /// Every parameter i.i.d. uniform in [-init_scale, init_scale], drawn from
  /// a mt19937_64 seeded with `seed`: prototypes first (row-major, one grid
  /// after another), then coefficients instance by instance.
  static PrototypeModel initialize(GridSize size, std::size_t k, std::size_t instances,
                                   double init_scale, std::uint64_t seed);
};

/// Pre-sigmoid logits of one instance. Throws ValidationError when
/// coefficients.size() != model.k().
MaskGrid assemble_mask(const PrototypeModel& model, std::span<const double> coefficients);

struct TrainConfig {
  double learning_rate = 0.05;
  /// Prototype step = learning_rate * prototype_lr_scale * gradient. A value
  /// of 0 selects the grid pixel count (see README, "Training").
  double prototype_lr_scale = 0.0;
  std::size_t steps = 2000;
  std::uint64_t seed = 0;
  std::size_t k = 8;
  double init_scale = 0.01;
  bool use_edge_loss = true;
  EdgeOperator op = EdgeOperator::Laplacian;
  LossWeights weights{};
  GtConfig gt{};

  void validate() const;
};

struct EvalReport {
  double iou = 0.0;
  double boundary_f1 = 0.0;
  double jaggedness = 0.0;
  std::vector<LossBreakdown> loss_history;
};

struct TrainResult {
  PrototypeModel model;
  std::vector<EvalReport> reports;          ///< one per instance
  std::vector<LossBreakdown> loss_history;  ///< summed over instances, one per step
};

/// Full-batch gradient descent on the total loss summed over instances.
/// The model must have one coefficient vector per label. Metrics compare
/// sigmoid(logits) with each label's mask_raw. Throws TrainingError on a
/// non-finite loss.
TrainResult train(PrototypeModel model, std::span<const GtLabel> dataset, const TrainConfig& cfg);

/// Gradient of the summed training loss w.r.t. every model parameter.
struct ModelGradient {
  std::vector<MaskGrid> prototypes;
  std::vector<std::vector<double>> coefficients;
  LossBreakdown loss;                      ///< summed over instances
  std::vector<LossBreakdown> per_instance;
};

/// One forward/backward pass of the training objective (no update). An
/// instance whose logits overflow contributes an infinite total.
ModelGradient model_loss_and_grad(const PrototypeModel& model, std::span<const GtLabel> dataset,
                                  const TrainConfig& cfg);

}  // namespace railedge
