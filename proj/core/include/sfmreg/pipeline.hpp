#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sfmreg/dataset.hpp"
#include "sfmreg/matching.hpp"
#include "sfmreg/metrics.hpp"
#include "sfmreg/ransac.hpp"
#include "sfmreg/types.hpp"

namespace sfmreg {

/// Full configuration of the registration pipeline. Every stochastic step
/// derives its stream from `seed`, so equal configs produce equal outputs
/// regardless of `jobs`.
struct PipelineParams {
  TransformMode mode = TransformMode::kSE3;
  int normals_k = 33;
  int superpoints = 1024;        // clamped to the cloud size
  PpfDescriptorParams descriptor{};  // coarse support (radius 0.15, 5+27 bins)
  CoarseMatchParams coarse{};
  int group_size = 64;
  SinkhornParams sinkhorn_params{};
  double confidence_min = 0.1;
  RansacParams ransac{};
  std::uint64_t seed = 0;
  int jobs = 1;
  /// Externally computed superpoint descriptors instead of PPF histograms.
  std::optional<std::filesystem::path> import_features_a;
  std::optional<std::filesystem::path> import_features_b;

  /// Fine per-point support: same binning at a quarter of the radius.
  PpfDescriptorParams fine_descriptor() const {
    PpfDescriptorParams fine = descriptor;
    fine.radius = descriptor.radius / 4.0;
    return fine;
  }
};

struct PipelineResult {
  SimilarityTransform transform_normalized;  // maps normalized A to B
  SimilarityTransform transform_scene;       // same transform, input frames
  NormalizationInfo info_a;
  NormalizationInfo info_b;
  CorrespondenceSet matches;  // rows into the two (full) clouds
  RegistrationResult registration;
  int superpoint_count_a = 0;
  int superpoint_count_b = 0;
  int coarse_pair_count = 0;
};

/// End-to-end registration of two clouds: normalize, superpoints, PPF (or
/// imported) descriptors, mutual coarse matching, local groups, Sinkhorn
/// transport, match extraction, score-weighted RANSAC. Missing normals are
/// estimated (neighborhood clamped to the cloud size) but cannot be
/// camera-oriented, which weakens matching; prefer clouds produced by
/// `ingest` or `gen-dataset`.
PipelineResult register_clouds(const OrientedCloud& cloud_a,
                               const OrientedCloud& cloud_b,
                               const PipelineParams& params);

}  // namespace sfmreg
