#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sfmreg/dataset.hpp"
#include "sfmreg/metrics.hpp"
#include "sfmreg/pipeline.hpp"

namespace sfmreg {

/// On-disk registration result: the effective configuration, both frames
/// of the estimated transform, the normalizations that connect them, and
/// inlier statistics. Timing is written only on request so that equal
/// configs and seeds produce byte-identical files.
struct RegistrationReportFile {
  PipelineParams config;
  SimilarityTransform transform_scene;
  SimilarityTransform transform_normalized;
  NormalizationInfo info_a;
  NormalizationInfo info_b;
  int num_matches = 0;
  int inlier_count = 0;
  double inlier_rms = 0.0;
  int iterations = 0;
  int superpoint_count_a = 0;
  int superpoint_count_b = 0;
  int coarse_pair_count = 0;
  std::string cloud_a;
  std::string cloud_b;
  std::string matches_file;
  std::optional<double> timing_ms;
};

void write_registration_report(const RegistrationReportFile& report,
                               const std::filesystem::path& path);
RegistrationReportFile read_registration_report(
    const std::filesystem::path& path);

/// Full configuration of a dataset generation run.
struct DatasetGenConfig {
  ManifestParams manifest;
  TrajectoryParams trajectory;
  int target_images = 200;
  int n_partials = 10;
  std::string strategy = "both";  // both | trajectories | random-points
  int normals_k = 33;
};

/// Manifest sidecar: pair entries plus the file names of the partial
/// clouds and the per-pair perturbed second clouds, all relative to the
/// manifest's directory.
struct ManifestFile {
  DatasetGenConfig config;
  std::vector<std::string> partial_files;
  std::vector<std::string> partial_origins;
  std::vector<std::string> pair_b_files;  // one per manifest entry
  PairManifest manifest;
};

void write_manifest_json(const ManifestFile& file,
                         const std::filesystem::path& path);
ManifestFile read_manifest_json(const std::filesystem::path& path);

struct BenchmarkReportFile {
  BenchmarkReport report;
  std::string manifest_file;
  std::string results_dir;
};

void write_benchmark_report(const BenchmarkReportFile& file,
                            const std::filesystem::path& path);
BenchmarkReportFile read_benchmark_report(const std::filesystem::path& path);

}  // namespace sfmreg
