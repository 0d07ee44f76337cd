// railedge: command-line front end for edge extraction, label smoothing and
// the toy ablation runner.
//
// Exit codes: 0 success, 2 unreadable/malformed input file, 64 usage error,
// 65 invalid data or manifest, 70 training diverged.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "railedge/edge_ops.hpp"
#include "railedge/errors.hpp"
#include "railedge/experiment.hpp"
#include "railedge/gt_pipeline.hpp"
#include "railedge/manifest.hpp"
#include "railedge/metrics.hpp"
#include "railedge/pgm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitTraining = 70;

constexpr const char* kOutputDirEnv = "RAILEDGE_OUTPUT_DIR";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

railedge::GridSize parse_size(const std::string& text, const char* flag) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("no 'x'");
    std::size_t used_h = 0;
    std::size_t used_w = 0;
    const std::string hs = text.substr(0, x);
    const std::string ws = text.substr(x + 1);
    const auto h = std::stoul(hs, &used_h);
    const auto w = std::stoul(ws, &used_w);
    if (used_h != hs.size() || used_w != ws.size() || h == 0 || w == 0) {
      throw std::invalid_argument("bad number");
    }
    return {h, w};
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + ": expected HEIGHTxWIDTH, got '" + text + "'");
  }
}

railedge::PgmFormat parse_format(const std::string& name) {
  return name == "p2" ? railedge::PgmFormat::Plain : railedge::PgmFormat::Binary;
}

int cmd_edge_extract(const std::string& input, const std::string& op_name,
                     const std::string& padding_name, const std::string& output,
                     const std::string& format) {
  const auto op = railedge::parse_edge_operator(op_name);
  const auto padding = railedge::parse_padding_mode(padding_name);
  const railedge::MaskGrid mask = railedge::read_pgm(input);
  const railedge::EdgeMap edges = railedge::extract_edges(mask, op, padding);
  railedge::write_pgm(output, edges.grid, parse_format(format));
  return kExitOk;
}

int cmd_smooth(const std::string& input, const std::string& source, const std::string& target,
               std::size_t box_size, const std::string& padding_name, const std::string& output,
               const std::string& format) {
  if (box_size == 0 || box_size % 2 == 0) {
    throw UsageError("--box-size must be odd and positive, got " + std::to_string(box_size));
  }
  railedge::GtConfig cfg;
  cfg.source_size = parse_size(source, "--source");
  cfg.target_size = parse_size(target, "--target");
  cfg.box_size = box_size;
  cfg.padding = railedge::parse_padding_mode(padding_name);
  cfg.smoothing_enabled = true;

  const railedge::MaskGrid mask = railedge::read_pgm(input);
  const railedge::GtLabel label =
      railedge::prepare_gt(mask, cfg, railedge::EdgeOperator::Laplacian);
  railedge::write_pgm(output, label.mask_smoothed, parse_format(format));
  std::printf("%.6f %.6f\n", railedge::jaggedness(label.mask_raw),
              railedge::jaggedness(label.mask_smoothed));
  return kExitOk;
}

int cmd_run(const std::string& manifest_path, bool parallel) {
  railedge::ExperimentManifest manifest = railedge::load_manifest(manifest_path);
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    manifest.output_dir = dir;
  }
  const auto arms = railedge::run_experiment(manifest, {parallel});
  for (const auto& arm : arms) {
    std::printf("%-14s iou=%.6f boundary_f1=%.6f jaggedness=%.6f\n", arm.arm.name.c_str(),
                arm.mean.iou, arm.mean.boundary_f1, arm.mean.jaggedness);
  }
  std::printf("outputs written to %s\n", manifest.output_dir.string().c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-aware mask loss toolkit"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string op_name = "laplacian";
  std::string padding_name = "replicate";
  std::string format = "p5";
  std::string source = "800x800";
  std::string target = "200x200";
  std::size_t box_size = 3;
  std::string manifest;
  bool parallel = false;

  auto* edge = app.add_subcommand("edge-extract", "Write the normalized edge map of a PGM mask");
  edge->add_option("--input,-i", input, "Input PGM mask")->required();
  edge->add_option("--operator", op_name, "sobel or laplacian")
      ->check(CLI::IsMember({"sobel", "laplacian"}));
  edge->add_option("--padding", padding_name, "zero or replicate")
      ->check(CLI::IsMember({"zero", "replicate"}));
  edge->add_option("--output,-o", output, "Output PGM")->required();
  edge->add_option("--format", format, "p2 or p5")->check(CLI::IsMember({"p2", "p5"}));

  auto* smooth = app.add_subcommand(
      "smooth", "Downscale a binary mask, box-filter it, report raw and smoothed jaggedness");
  smooth->add_option("--input,-i", input, "Input binary PGM mask")->required();
  smooth->add_option("--source", source, "Expected input size HEIGHTxWIDTH");
  smooth->add_option("--target", target, "Output size HEIGHTxWIDTH");
  smooth->add_option("--box-size,-m", box_size, "Odd box filter size");
  smooth->add_option("--padding", padding_name, "zero or replicate")
      ->check(CLI::IsMember({"zero", "replicate"}));
  smooth->add_option("--output,-o", output, "Output PGM")->required();
  smooth->add_option("--format", format, "p2 or p5")->check(CLI::IsMember({"p2", "p5"}));

  auto* run = app.add_subcommand("run", "Run the three-arm ablation described by a manifest");
  run->add_option("--manifest,-m", manifest, "Experiment manifest (JSON)")->required();
  run->add_flag("--parallel-arms", parallel, "Train the arms concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (edge->parsed()) return cmd_edge_extract(input, op_name, padding_name, output, format);
    if (smooth->parsed()) {
      return cmd_smooth(input, source, target, box_size, padding_name, output, format);
    }
    return cmd_run(manifest, parallel);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const railedge::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const railedge::TrainingError& e) {
    std::cerr << "error: " << e.what() << " (step " << e.step() << ")\n";
    return kExitTraining;
  } catch (const railedge::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
