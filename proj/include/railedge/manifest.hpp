#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "railedge/errors.hpp"
#include "railedge/gt_pipeline.hpp"
#include "railedge/toy_model.hpp"

namespace railedge {

/// The manifest failed schema validation.
class ManifestError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// One dataset item: a synthetic trapezoid in source-size pixel coordinates,
/// or a binary PGM mask file.
using DatasetEntry = std::variant<Trapezoid, std::filesystem::path>;

struct ExperimentManifest {
  std::vector<DatasetEntry> dataset;
  TrainConfig train;  ///< train.gt holds the "gt" section
  std::filesystem::path output_dir;
};

/// Validates `doc` against the schema in docs/manifest.schema.json. Relative
/// mask paths and output_dir are resolved against `base_dir`.
ExperimentManifest parse_manifest(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});

/// Reads and parses a manifest file. Throws IoError when the file cannot be
/// read, ManifestError when it is not JSON or violates the schema.
ExperimentManifest load_manifest(const std::filesystem::path& path);

/// Full-resolution binary masks for every dataset entry.
std::vector<MaskGrid> load_dataset_masks(const ExperimentManifest& manifest);

}  // namespace railedge
