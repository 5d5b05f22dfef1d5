#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfmreg/geometry.hpp"
#include "sfmreg/metrics.hpp"

namespace sfmreg {

namespace {

double sorted_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

InlierRatioResult inlier_ratio(const CorrespondenceSet& corrs,
                               const OrientedCloud& src,
                               const OrientedCloud& dst,
                               const SimilarityTransform& gt, double tau_ir) {
  InlierRatioResult out;
  if (corrs.size() == 0) {
    out.empty = true;
    return out;
  }
  for (const auto& [i, j] : corrs.pairs) {
    const double d = (gt(src.points.at(i)) - dst.points.at(j)).norm();
    if (d < tau_ir) ++out.inliers;
  }
  out.ratio =
      static_cast<double>(out.inliers) / static_cast<double>(corrs.size());
  return out;
}

double rotation_error(const Eigen::Matrix3d& r, const Eigen::Matrix3d& r_gt) {
  check_rotation(r);
  check_rotation(r_gt);
  const double arg =
      std::clamp(((r.transpose() * r_gt).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(arg);
}

double translation_error(const Eigen::Vector3d& t,
                         const Eigen::Vector3d& t_gt) {
  return (t - t_gt).norm();
}

double feature_matching_recall(const std::vector<double>& ratios,
                               double tau_fmr) {
  if (ratios.empty()) {
    throw Error(ErrorCode::kEmptyList, "FMR over an empty pair list");
  }
  std::size_t above = 0;
  for (const double r : ratios) {
    if (r > tau_fmr) ++above;  // strict: exactly at the threshold is out
  }
  return static_cast<double>(above) / static_cast<double>(ratios.size());
}

double registration_recall(const std::vector<PairEvaluation>& evals,
                           const MetricThresholds& thresholds) {
  if (evals.empty()) {
    throw Error(ErrorCode::kEmptyList, "RR over an empty pair list");
  }
  const double rot_limit = thresholds.rr_rot_deg * std::numbers::pi / 180.0;
  std::size_t hits = 0;
  for (const auto& e : evals) {
    if (e.rot_error_rad < rot_limit && e.trans_error < thresholds.rr_trans) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(evals.size());
}

PairEvaluation evaluate_pair(int a, int b, const CorrespondenceSet& corrs,
                             const OrientedCloud& src_normalized,
                             const OrientedCloud& dst_normalized,
                             const SimilarityTransform& gt_normalized,
                             const SimilarityTransform& estimated,
                             const MetricThresholds& thresholds) {
  PairEvaluation eval;
  eval.a = a;
  eval.b = b;
  const InlierRatioResult ir = inlier_ratio(corrs, src_normalized,
                                            dst_normalized, gt_normalized,
                                            thresholds.tau_ir);
  eval.inlier_ratio = ir.ratio;
  eval.num_inliers = ir.inliers;
  eval.num_matches = corrs.size();
  eval.empty_matches = ir.empty;
  eval.rot_error_rad =
      rotation_error(estimated.rotation, gt_normalized.rotation);
  eval.trans_error =
      translation_error(estimated.translation, gt_normalized.translation);
  const double rot_limit = thresholds.rr_rot_deg * std::numbers::pi / 180.0;
  eval.registered = eval.rot_error_rad < rot_limit &&
                    eval.trans_error < thresholds.rr_trans;
  return eval;
}

BenchmarkReport aggregate(const std::vector<PairEvaluation>& evals,
                          const MetricThresholds& thresholds) {
  if (evals.empty()) {
    throw Error(ErrorCode::kEmptyList, "aggregate over an empty pair list");
  }
  BenchmarkReport report;
  report.pairs = evals;
  report.thresholds = thresholds;

  std::vector<double> ratios, matches;
  ratios.reserve(evals.size());
  matches.reserve(evals.size());
  std::size_t total_inliers = 0, total_matches = 0;
  for (const auto& e : evals) {
    ratios.push_back(e.inlier_ratio);
    matches.push_back(static_cast<double>(e.num_matches));
    total_inliers += e.num_inliers;
    total_matches += e.num_matches;
  }
  report.aggregates.ir_mean = sorted_mean(ratios);
  report.aggregates.ir_pooled =
      total_matches > 0
          ? static_cast<double>(total_inliers) / total_matches
          : 0.0;
  report.aggregates.fmr = feature_matching_recall(ratios, thresholds.tau_fmr);
  report.aggregates.rr = registration_recall(evals, thresholds);
  report.aggregates.matches_mean = sorted_mean(matches);
  return report;
}

}  // namespace sfmreg
