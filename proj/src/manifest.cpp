#include "railedge/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "railedge/pgm.hpp"

namespace railedge {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ManifestError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ManifestError(where + ": unknown key '" + key + "'");
    }
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ManifestError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ManifestError(where + ": must be finite");
  return v;
}

std::uint64_t get_unsigned(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  throw ManifestError(where + ": expected a non-negative integer");
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) throw ManifestError(where + ": expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ManifestError(where + ": expected a string");
  return j.get<std::string>();
}

std::pair<double, double> get_pair(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ManifestError(where + ": expected [a, b]");
  return {get_number(j[0], where + "[0]"), get_number(j[1], where + "[1]")};
}

GridSize get_size(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ManifestError(where + ": expected [height, width]");
  const auto h = get_unsigned(j[0], where + "[0]");
  const auto w = get_unsigned(j[1], where + "[1]");
  if (h == 0 || w == 0) throw ManifestError(where + ": sizes must be positive");
  return {static_cast<std::size_t>(h), static_cast<std::size_t>(w)};
}

DatasetEntry parse_entry(const json& j, const std::string& where,
                         const std::filesystem::path& base_dir) {
  require_object(j, where);
  reject_unknown(j, where, {"trapezoid", "mask_file"});
  if (j.size() != 1) throw ManifestError(where + ": expected exactly one of trapezoid, mask_file");
  if (j.contains("mask_file")) {
    std::filesystem::path p = get_string(j["mask_file"], where + ".mask_file");
    return p.is_absolute() ? p : base_dir / p;
  }
  const json& t = j["trapezoid"];
  const std::string tw = where + ".trapezoid";
  require_object(t, tw);
  reject_unknown(t, tw, {"top", "top_row", "bottom", "bottom_row"});
  for (const char* key : {"top", "top_row", "bottom", "bottom_row"}) {
    if (!t.contains(key)) throw ManifestError(tw + ": missing '" + key + "'");
  }
  Trapezoid trap;
  const auto [tl, tr] = get_pair(t["top"], tw + ".top");
  const auto [bl, br] = get_pair(t["bottom"], tw + ".bottom");
  trap.top = {tl, tr};
  trap.bottom = {bl, br};
  trap.top_row = get_number(t["top_row"], tw + ".top_row");
  trap.bottom_row = get_number(t["bottom_row"], tw + ".bottom_row");
  return trap;
}

void parse_gt(const json& j, GtConfig& gt) {
  require_object(j, "gt");
  reject_unknown(j, "gt", {"source_size", "target_size", "box_size", "smoothing_enabled",
                           "padding", "edge_target_from_smoothed"});
  if (j.contains("source_size")) gt.source_size = get_size(j["source_size"], "gt.source_size");
  if (j.contains("target_size")) gt.target_size = get_size(j["target_size"], "gt.target_size");
  if (j.contains("box_size")) {
    gt.box_size = static_cast<std::size_t>(get_unsigned(j["box_size"], "gt.box_size"));
  }
  if (j.contains("smoothing_enabled")) {
    gt.smoothing_enabled = get_bool(j["smoothing_enabled"], "gt.smoothing_enabled");
  }
  if (j.contains("padding")) {
    try {
      gt.padding = parse_padding_mode(get_string(j["padding"], "gt.padding"));
    } catch (const ManifestError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ManifestError(std::string("gt.padding: ") + e.what());
    }
  }
  if (j.contains("edge_target_from_smoothed")) {
    gt.edge_target_from_smoothed =
        get_bool(j["edge_target_from_smoothed"], "gt.edge_target_from_smoothed");
  }
}

void parse_weights(const json& j, LossWeights& w) {
  require_object(j, "train.weights");
  reject_unknown(j, "train.weights", {"cls", "bbox", "mask", "edge_temperature"});
  if (j.contains("cls")) w.w_cls = get_number(j["cls"], "train.weights.cls");
  if (j.contains("bbox")) w.w_bbox = get_number(j["bbox"], "train.weights.bbox");
  if (j.contains("mask")) w.w_mask = get_number(j["mask"], "train.weights.mask");
  if (j.contains("edge_temperature")) {
    w.edge_temperature = get_number(j["edge_temperature"], "train.weights.edge_temperature");
  }
}

void parse_train(const json& j, TrainConfig& cfg) {
  require_object(j, "train");
  reject_unknown(j, "train", {"learning_rate", "prototype_lr_scale", "steps", "seed", "k",
                              "init_scale", "use_edge_loss", "operator", "weights"});
  if (j.contains("learning_rate")) {
    cfg.learning_rate = get_number(j["learning_rate"], "train.learning_rate");
  }
  if (j.contains("prototype_lr_scale")) {
    cfg.prototype_lr_scale = get_number(j["prototype_lr_scale"], "train.prototype_lr_scale");
  }
  if (j.contains("steps")) cfg.steps = static_cast<std::size_t>(get_unsigned(j["steps"], "train.steps"));
  if (j.contains("seed")) cfg.seed = get_unsigned(j["seed"], "train.seed");
  if (j.contains("k")) cfg.k = static_cast<std::size_t>(get_unsigned(j["k"], "train.k"));
  if (j.contains("init_scale")) cfg.init_scale = get_number(j["init_scale"], "train.init_scale");
  if (j.contains("use_edge_loss")) cfg.use_edge_loss = get_bool(j["use_edge_loss"], "train.use_edge_loss");
  if (j.contains("operator")) {
    const std::string name = get_string(j["operator"], "train.operator");
    if (name != "sobel" && name != "laplacian") {
      throw ManifestError("train.operator: expected \"sobel\" or \"laplacian\"");
    }
    cfg.op = parse_edge_operator(name);
  }
  if (j.contains("weights")) parse_weights(j["weights"], cfg.weights);
}

}  // namespace

ExperimentManifest parse_manifest(const json& doc, const std::filesystem::path& base_dir) {
  require_object(doc, "manifest");
  reject_unknown(doc, "manifest", {"dataset", "gt", "train", "output_dir"});
  if (!doc.contains("dataset")) throw ManifestError("manifest: missing 'dataset'");
  if (!doc.contains("output_dir")) throw ManifestError("manifest: missing 'output_dir'");

  ExperimentManifest m;
  const json& ds = doc["dataset"];
  if (!ds.is_array() || ds.empty()) throw ManifestError("dataset: expected a non-empty array");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    m.dataset.push_back(parse_entry(ds[i], "dataset[" + std::to_string(i) + "]", base_dir));
  }
  if (doc.contains("gt")) parse_gt(doc["gt"], m.train.gt);
  if (doc.contains("train")) parse_train(doc["train"], m.train);

  std::filesystem::path out = get_string(doc["output_dir"], "output_dir");
  if (out.empty()) throw ManifestError("output_dir: must not be empty");
  m.output_dir = out.is_absolute() ? out : base_dir / out;

  try {
    m.train.validate();
  } catch (const ValidationError& e) {
    throw ManifestError(e.what());
  }
  for (std::size_t i = 0; i < m.dataset.size(); ++i) {
    if (const auto* trap = std::get_if<Trapezoid>(&m.dataset[i])) {
      try {
        trap->validate(m.train.gt.source_size);
      } catch (const ValidationError& e) {
        throw ManifestError("dataset[" + std::to_string(i) + "]: " + e.what());
      }
    }
  }
  return m;
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ManifestError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_manifest(doc, path.parent_path());
}

std::vector<MaskGrid> load_dataset_masks(const ExperimentManifest& manifest) {
  std::vector<MaskGrid> masks;
  masks.reserve(manifest.dataset.size());
  for (const auto& entry : manifest.dataset) {
    if (const auto* trap = std::get_if<Trapezoid>(&entry)) {
      masks.push_back(rasterize_trapezoid(*trap, manifest.train.gt.source_size));
    } else {
      masks.push_back(read_pgm(std::get<std::filesystem::path>(entry)));
    }
  }
  return masks;
}

}  // namespace railedge
