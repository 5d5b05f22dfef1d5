#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "sfmreg/types.hpp"

namespace sfmreg {

struct MetricThresholds {
  double tau_ir = 0.1;     // inlier ratio distance, strict <
  double tau_fmr = 0.05;   // FMR cutoff on IR, strict >
  double rr_rot_deg = 5.0; // registration recall, strict < on both
  double rr_trans = 0.05;
};

struct InlierRatioResult {
  double ratio = 0.0;
  std::size_t inliers = 0;
  bool empty = false;  // no matches; ratio 0 by convention
};

/// Fraction of correspondences with || gt(p) - q || strictly below tau_ir.
/// Distances are expected in the normalized frame (pass normalized clouds
/// and a gt expressed between them). An empty set gives ratio 0, flagged.
InlierRatioResult inlier_ratio(const CorrespondenceSet& corrs,
                               const OrientedCloud& src,
                               const OrientedCloud& dst,
                               const SimilarityTransform& gt, double tau_ir);

/// Geodesic angle acos((trace(R^-1 * R_gt) - 1) / 2), clamped before the
/// acos. Throws NotARotation.
double rotation_error(const Eigen::Matrix3d& r, const Eigen::Matrix3d& r_gt);

double translation_error(const Eigen::Vector3d& t, const Eigen::Vector3d& t_gt);

/// Fraction of pairs whose inlier ratio is strictly above tau_fmr.
/// Throws EmptyList.
double feature_matching_recall(const std::vector<double>& ratios,
                               double tau_fmr);

struct PairEvaluation {
  int a = -1;
  int b = -1;
  double inlier_ratio = 0.0;
  std::size_t num_matches = 0;
  std::size_t num_inliers = 0;  // matches within tau_ir under gt
  bool empty_matches = false;
  double rot_error_rad = 0.0;
  double trans_error = 0.0;
  bool registered = false;  // both errors strictly below the RR thresholds
};

/// Fraction of pairs with rotation error strictly below rr_rot_deg and
/// translation error strictly below rr_trans.
double registration_recall(const std::vector<PairEvaluation>& evals,
                           const MetricThresholds& thresholds);

/// Scores one pair. gt and the estimated transform must live in the same
/// (normalized) frame as the clouds.
PairEvaluation evaluate_pair(int a, int b, const CorrespondenceSet& corrs,
                             const OrientedCloud& src_normalized,
                             const OrientedCloud& dst_normalized,
                             const SimilarityTransform& gt_normalized,
                             const SimilarityTransform& estimated,
                             const MetricThresholds& thresholds);

struct BenchmarkAggregates {
  double ir_mean = 0.0;    // mean of per-pair inlier ratios
  double ir_pooled = 0.0;  // total inliers / total matches
  double fmr = 0.0;
  double rr = 0.0;
  double matches_mean = 0.0;
};

struct BenchmarkReport {
  std::vector<PairEvaluation> pairs;
  BenchmarkAggregates aggregates;
  MetricThresholds thresholds;
};

/// Aggregation is permutation-invariant: means are accumulated over sorted
/// values so reordering the evaluations cannot change a single bit.
BenchmarkReport aggregate(const std::vector<PairEvaluation>& evals,
                          const MetricThresholds& thresholds);

}  // namespace sfmreg
