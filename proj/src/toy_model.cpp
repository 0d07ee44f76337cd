#include "railedge/toy_model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "railedge/errors.hpp"
#include "railedge/metrics.hpp"

namespace railedge {

namespace {

// Portable [0, 1) draw: top 53 bits of the engine output.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

LossWeights effective_weights(const TrainConfig& cfg) {
  LossWeights w = cfg.weights;
  w.edge_enabled = cfg.use_edge_loss;
  return w;
}

void check_dataset(const PrototypeModel& model, std::span<const GtLabel> dataset) {
  if (dataset.empty()) throw ValidationError("train: dataset is empty");
  if (model.k() == 0) throw ValidationError("train: model has no prototypes");
  if (model.instances() != dataset.size()) {
    throw ValidationError("train: model has " + std::to_string(model.instances()) +
                          " coefficient vectors for " + std::to_string(dataset.size()) +
                          " labels");
  }
  for (const auto& label : dataset) {
    if (!label.mask_smoothed.same_shape(model.prototypes.front())) {
      throw ValidationError("train: label and prototype shapes differ");
    }
  }
}

}  // namespace

PrototypeModel PrototypeModel::initialize(GridSize size, std::size_t k, std::size_t instances,
                                          double init_scale, std::uint64_t seed) {
  if (k == 0) throw ValidationError("PrototypeModel: k must be at least 1");
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale)) {
    throw ValidationError("PrototypeModel: init_scale must be finite and non-negative");
  }
  std::mt19937_64 rng(seed);
  auto draw = [&] { return init_scale * (2.0 * unit_draw(rng) - 1.0); };

  PrototypeModel model;
  model.prototypes.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    MaskGrid p(size.height, size.width);
    for (double& v : p.values()) v = draw();
    model.prototypes.push_back(std::move(p));
  }
  model.coefficients.assign(instances, std::vector<double>(k));
  for (auto& coeffs : model.coefficients) {
    for (double& c : coeffs) c = draw();
  }
  return model;
}

MaskGrid assemble_mask(const PrototypeModel& model, std::span<const double> coefficients) {
  if (model.k() == 0) throw ValidationError("assemble_mask: model has no prototypes");
  if (coefficients.size() != model.k()) {
    throw ValidationError("assemble_mask: expected " + std::to_string(model.k()) +
                          " coefficients, got " + std::to_string(coefficients.size()));
  }
  const auto& first = model.prototypes.front();
  MaskGrid logits(first.height(), first.width());
  auto out = logits.values();
  for (std::size_t i = 0; i < model.k(); ++i) {
    const double c = coefficients[i];
    const auto p = model.prototypes[i].values();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * p[j];
  }
  return logits;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("TrainConfig: learning_rate must be positive");
  }
  if (!(prototype_lr_scale >= 0.0) || !std::isfinite(prototype_lr_scale)) {
    throw ValidationError("TrainConfig: prototype_lr_scale must be non-negative");
  }
  if (steps == 0) throw ValidationError("TrainConfig: steps must be positive");
  if (k == 0) throw ValidationError("TrainConfig: k must be positive");
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) {
    throw ValidationError("TrainConfig: init_scale must be positive");
  }
  weights.validate();
  gt.validate();
}

ModelGradient model_loss_and_grad(const PrototypeModel& model, std::span<const GtLabel> dataset,
                                  const TrainConfig& cfg) {
  check_dataset(model, dataset);
  const LossWeights weights = effective_weights(cfg);
  const auto& shape = model.prototypes.front();

  ModelGradient grad;
  grad.prototypes.assign(model.k(), MaskGrid(shape.height(), shape.width()));
  grad.coefficients.assign(model.instances(), std::vector<double>(model.k(), 0.0));
  grad.per_instance.reserve(dataset.size());

  // Instances are visited in index order so sums are reproducible.
  for (std::size_t n = 0; n < dataset.size(); ++n) {
    const auto& label = dataset[n];
    const MaskGrid logits = assemble_mask(model, model.coefficients[n]);
    if (!logits.all_finite()) {
      // Overflowed parameters: report an infinite loss and leave the
      // gradient of this instance at zero.
      LossBreakdown inf;
      inf.total = std::numeric_limits<double>::infinity();
      grad.loss += inf;
      grad.per_instance.push_back(inf);
      continue;
    }
    LossAndGrad lg = total_loss_and_grad(logits, label.mask_smoothed, label.edge_target.grid,
                                         cfg.op, weights, cfg.gt.padding);
    grad.loss += lg.breakdown;
    grad.per_instance.push_back(lg.breakdown);

    const auto g = lg.grad.values();
    for (std::size_t i = 0; i < model.k(); ++i) {
      const double c = model.coefficients[n][i];
      const auto p = model.prototypes[i].values();
      auto gp = grad.prototypes[i].values();
      double dc = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        gp[j] += c * g[j];
        dc += p[j] * g[j];
      }
      grad.coefficients[n][i] = dc;
    }
  }
  return grad;
}

TrainResult train(PrototypeModel model, std::span<const GtLabel> dataset, const TrainConfig& cfg) {
  cfg.validate();
  check_dataset(model, dataset);

  const auto& shape = model.prototypes.front();
  const double proto_scale = cfg.prototype_lr_scale > 0.0
                                 ? cfg.prototype_lr_scale
                                 : static_cast<double>(shape.size());
  const double proto_lr = cfg.learning_rate * proto_scale;

  TrainResult result;
  result.reports.resize(dataset.size());
  result.loss_history.reserve(cfg.steps);
  for (auto& report : result.reports) report.loss_history.reserve(cfg.steps);

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const ModelGradient grad = model_loss_and_grad(model, dataset, cfg);
    if (!std::isfinite(grad.loss.total)) {
      throw TrainingError(step, "training diverged: non-finite loss at step " +
                                    std::to_string(step));
    }
    result.loss_history.push_back(grad.loss);
    for (std::size_t n = 0; n < dataset.size(); ++n) {
      result.reports[n].loss_history.push_back(grad.per_instance[n]);
    }

    for (std::size_t i = 0; i < model.k(); ++i) {
      auto p = model.prototypes[i].values();
      const auto gp = grad.prototypes[i].values();
      for (std::size_t j = 0; j < p.size(); ++j) p[j] -= proto_lr * gp[j];
    }
    for (std::size_t n = 0; n < model.instances(); ++n) {
      for (std::size_t i = 0; i < model.k(); ++i) {
        model.coefficients[n][i] -= cfg.learning_rate * grad.coefficients[n][i];
      }
    }
  }

  for (std::size_t n = 0; n < dataset.size(); ++n) {
    const MaskGrid pred = sigmoid(assemble_mask(model, model.coefficients[n]));
    auto& report = result.reports[n];
    report.iou = iou(pred, dataset[n].mask_raw);
    report.boundary_f1 = boundary_f1(pred, dataset[n].mask_raw);
    report.jaggedness = jaggedness(pred);
  }
  result.model = std::move(model);
  return result;
}

}  // namespace railedge
