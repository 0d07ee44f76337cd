#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "railedge/manifest.hpp"
#include "railedge/toy_model.hpp"

namespace railedge {

/// One arm of the ablation: which of the two training-time additions are on.
struct ArmSpec {
  std::string name;
  bool smoothing = false;
  bool edge_loss = false;
};

/// (a) neither, (b) edge loss only, (c) smoothing and edge loss.
const std::array<ArmSpec, 3>& ablation_arms();

struct MetricMeans {
  double iou = 0.0;
  double boundary_f1 = 0.0;
  double jaggedness = 0.0;
};

struct ArmResult {
  ArmSpec arm;
  TrainResult result;
  std::vector<MaskGrid> predictions;  ///< sigmoid(logits) per instance
  MetricMeans mean;
};

struct RunOptions {
  /// Train the three arms on separate threads. Results are identical to a
  /// sequential run.
  bool parallel_arms = false;
};

/// Trains one arm: the manifest's config with smoothing and edge loss
/// overridden by `arm`.
ArmResult run_arm(const ArmSpec& arm, const ExperimentManifest& manifest,
                  const std::vector<MaskGrid>& full_masks);

/// Runs every ablation arm with the manifest seed. Does not touch the disk.
std::vector<ArmResult> run_ablation(const ExperimentManifest& manifest,
                                    const RunOptions& options = {});

/// Writes <dir>/loss.csv, metrics.json, final_loss.json and pred_NNN.pgm.
void write_arm_outputs(const ArmResult& arm, const std::filesystem::path& dir);

/// run_ablation followed by write_arm_outputs into output_dir/<arm name>.
std::vector<ArmResult> run_experiment(const ExperimentManifest& manifest,
                                      const RunOptions& options = {});

/// {"cls", "bbox", "mask", "edge_raw", "edge_coupled", "total"}
nlohmann::json to_json(const LossBreakdown& loss);

/// CSV with header step,cls,bbox,mask,edge_raw,edge_coupled,total; values
/// printed with 17 significant digits.
std::string loss_history_csv(const std::vector<LossBreakdown>& history);

/// {"instances": [{iou, boundary_f1, jaggedness}, ...], "mean": {...}}
nlohmann::json metrics_json(const ArmResult& arm);

}  // namespace railedge
