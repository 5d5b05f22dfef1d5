#pragma once

#include <cstdint>
#include <vector>

#include "sfmreg/types.hpp"

namespace sfmreg {

struct RansacParams {
  double inlier_threshold = 0.05;  // strict <, normalized units
  int max_correspondences = 1000;
  int max_iterations = 50000;
  double confidence = 0.999;
  TransformMode mode = TransformMode::kSE3;
  std::uint64_t seed = 0;
};

struct InlierStats {
  int count = 0;
  std::vector<bool> mask;
  double rms = 0.0;  // over inliers only
};

struct RegistrationResult {
  SimilarityTransform transform;
  std::vector<bool> inlier_mask;  // over the used correspondences
  int inlier_count = 0;
  double inlier_rms = 0.0;
  int iterations = 0;
  /// Indices into the input correspondence set that survived subsampling
  /// (identity when no subsampling happened).
  std::vector<int> used_correspondence_indices;
};

/// Caps the correspondence set at params.max_correspondences. Larger sets
/// are subsampled without replacement with probability proportional to
/// score (uniform when all scores are zero); smaller sets pass through
/// unchanged. Deterministic under params.seed.
CorrespondenceSet subsample_correspondences(const CorrespondenceSet& corrs,
                                            const RansacParams& params);

/// Inliers of T: pairs with || T(p) - q || strictly below threshold, plus
/// the RMS residual over the inliers.
InlierStats count_inliers(const SimilarityTransform& T,
                          const OrientedCloud& src, const OrientedCloud& dst,
                          const CorrespondenceSet& corrs, double threshold);

/// Score-weighted 3-point RANSAC with closed-form refit: samples three
/// distinct correspondences (rejecting near-collinear triples), fits a
/// similarity (scale fitted only in Sim3 mode), keeps the hypothesis with
/// the most inliers (ties towards lower inlier RMS), stops at the adaptive
/// iteration bound derived from `confidence`, and refits on the final
/// inlier set. Bit-reproducible under a fixed seed.
/// Throws InsufficientCorrespondences (< 3) and NoModelFound (no sample
/// reached 3 inliers).
RegistrationResult ransac_register(const OrientedCloud& src,
                                   const OrientedCloud& dst,
                                   const CorrespondenceSet& corrs,
                                   const RansacParams& params);

}  // namespace sfmreg
