#include "railedge/experiment.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <thread>

#include "railedge/errors.hpp"
#include "railedge/gt_pipeline.hpp"
#include "railedge/pgm.hpp"

namespace railedge {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const std::array<ArmSpec, 3>& ablation_arms() {
  static const std::array<ArmSpec, 3> arms{{
      {"a_baseline", false, false},
      {"b_edge", false, true},
      {"c_smooth_edge", true, true},
  }};
  return arms;
}

ArmResult run_arm(const ArmSpec& arm, const ExperimentManifest& manifest,
                  const std::vector<MaskGrid>& full_masks) {
  TrainConfig cfg = manifest.train;
  cfg.gt.smoothing_enabled = arm.smoothing;
  cfg.use_edge_loss = arm.edge_loss;
  cfg.validate();

  std::vector<GtLabel> labels;
  labels.reserve(full_masks.size());
  for (const auto& mask : full_masks) labels.push_back(prepare_gt(mask, cfg.gt, cfg.op));

  PrototypeModel model = PrototypeModel::initialize(cfg.gt.target_size, cfg.k, labels.size(),
                                                    cfg.init_scale, cfg.seed);
  ArmResult out{arm, {}, {}, {}};
  try {
    out.result = train(std::move(model), labels, cfg);
  } catch (const TrainingError& e) {
    throw TrainingError(e.step(), "arm " + arm.name + ": " + e.what());
  }

  const auto n = static_cast<double>(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.predictions.push_back(
        sigmoid(assemble_mask(out.result.model, out.result.model.coefficients[i])));
    const auto& r = out.result.reports[i];
    out.mean.iou += r.iou / n;
    out.mean.boundary_f1 += r.boundary_f1 / n;
    out.mean.jaggedness += r.jaggedness / n;
  }
  return out;
}

std::vector<ArmResult> run_ablation(const ExperimentManifest& manifest, const RunOptions& options) {
  const std::vector<MaskGrid> masks = load_dataset_masks(manifest);
  const auto& arms = ablation_arms();

  if (!options.parallel_arms) {
    std::vector<ArmResult> results;
    for (const auto& arm : arms) results.push_back(run_arm(arm, manifest, masks));
    return results;
  }

  std::vector<std::optional<ArmResult>> slots(arms.size());
  std::vector<std::exception_ptr> errors(arms.size());
  {
    std::vector<std::jthread> workers;
    for (std::size_t i = 0; i < arms.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          slots[i] = run_arm(arms[i], manifest, masks);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<ArmResult> results;
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

nlohmann::json to_json(const LossBreakdown& loss) {
  return {{"cls", loss.cls},           {"bbox", loss.bbox},
          {"mask", loss.mask},         {"edge_raw", loss.edge_raw},
          {"edge_coupled", loss.edge_coupled}, {"total", loss.total}};
}

std::string loss_history_csv(const std::vector<LossBreakdown>& history) {
  std::string csv = "step,cls,bbox,mask,edge_raw,edge_coupled,total\n";
  for (std::size_t step = 0; step < history.size(); ++step) {
    const auto& l = history[step];
    csv += std::to_string(step);
    for (double v : {l.cls, l.bbox, l.mask, l.edge_raw, l.edge_coupled, l.total}) {
      csv += ',';
      csv += format_number(v);
    }
    csv += '\n';
  }
  return csv;
}

nlohmann::json metrics_json(const ArmResult& arm) {
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& r : arm.result.reports) {
    instances.push_back(
        {{"iou", r.iou}, {"boundary_f1", r.boundary_f1}, {"jaggedness", r.jaggedness}});
  }
  return {{"instances", std::move(instances)},
          {"mean",
           {{"iou", arm.mean.iou},
            {"boundary_f1", arm.mean.boundary_f1},
            {"jaggedness", arm.mean.jaggedness}}}};
}

void write_arm_outputs(const ArmResult& arm, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  write_text(dir / "loss.csv", loss_history_csv(arm.result.loss_history));
  write_text(dir / "metrics.json", metrics_json(arm).dump(2) + "\n");
  const LossBreakdown final_loss =
      arm.result.loss_history.empty() ? LossBreakdown{} : arm.result.loss_history.back();
  write_text(dir / "final_loss.json", to_json(final_loss).dump(2) + "\n");
  for (std::size_t i = 0; i < arm.predictions.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "pred_%03zu.pgm", i);
    write_pgm(dir / name, arm.predictions[i]);
  }
}

std::vector<ArmResult> run_experiment(const ExperimentManifest& manifest,
                                      const RunOptions& options) {
  std::vector<ArmResult> results = run_ablation(manifest, options);
  for (const auto& arm : results) write_arm_outputs(arm, manifest.output_dir / arm.arm.name);
  return results;
}

}  // namespace railedge
