#include <array>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

#include "sfmreg/geometry.hpp"
#include "sfmreg/ransac.hpp"
#include "sfmreg/rng.hpp"

namespace sfmreg {

namespace {

// Sequential weighted sampling without replacement. Weights of drawn items
// are zeroed; all-zero weights fall back to uniform over the remainder.
std::vector<int> weighted_sample_without_replacement(
    const std::vector<double>& weights_in, int count, Rng& rng) {
  std::vector<double> weights = weights_in;
  const int n = static_cast<int>(weights.size());
  std::vector<int> picked;
  picked.reserve(count);
  std::vector<char> taken(n, 0);
  for (int draw = 0; draw < count; ++draw) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!taken[i]) total += weights[i];
    }
    int chosen = -1;
    if (total > 0.0) {
      const double u = rng.uniform01() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        if (taken[i]) continue;
        acc += weights[i];
        if (u < acc) {
          chosen = i;
          break;
        }
      }
      if (chosen < 0) {  // u landed on the accumulated rounding tail
        for (int i = n - 1; i >= 0; --i) {
          if (!taken[i]) {
            chosen = i;
            break;
          }
        }
      }
    } else {
      // Uniform over the remaining items.
      int remaining = 0;
      for (int i = 0; i < n; ++i) remaining += !taken[i];
      auto target = rng.below(static_cast<std::uint64_t>(remaining));
      for (int i = 0; i < n; ++i) {
        if (taken[i]) continue;
        if (target == 0) {
          chosen = i;
          break;
        }
        --target;
      }
    }
    taken[chosen] = 1;
    picked.push_back(chosen);
  }
  return picked;
}

// Rejects triples whose smallest triangle altitude is below 1e-6 of the
// longest side, which would make the closed-form fit numerically wild.
bool triple_is_degenerate(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                          const Eigen::Vector3d& c) {
  const double ab = (b - a).norm();
  const double ac = (c - a).norm();
  const double bc = (c - b).norm();
  const double longest = std::max({ab, ac, bc});
  if (longest <= 0.0) return true;
  const double doubled_area = (b - a).cross(c - a).norm();
  return doubled_area < 1e-6 * longest * longest;
}

}  // namespace

CorrespondenceSet subsample_correspondences(const CorrespondenceSet& corrs,
                                            const RansacParams& params) {
  if (corrs.size() == 0) {
    throw Error(ErrorCode::kInsufficientCorrespondences, "no correspondences");
  }
  if (corrs.size() <= static_cast<std::size_t>(params.max_correspondences)) {
    return corrs;
  }
  Rng rng(params.seed);
  const auto picked = weighted_sample_without_replacement(
      corrs.scores, params.max_correspondences, rng);
  CorrespondenceSet out;
  out.pairs.reserve(picked.size());
  out.scores.reserve(picked.size());
  for (const int i : picked) {
    out.pairs.push_back(corrs.pairs[i]);
    out.scores.push_back(corrs.scores[i]);
  }
  return out;
}

InlierStats count_inliers(const SimilarityTransform& T,
                          const OrientedCloud& src, const OrientedCloud& dst,
                          const CorrespondenceSet& corrs, double threshold) {
  InlierStats stats;
  stats.mask.assign(corrs.size(), false);
  double sq_sum = 0.0;
  for (std::size_t m = 0; m < corrs.size(); ++m) {
    const auto& [i, j] = corrs.pairs[m];
    const double d = (T(src.points.at(i)) - dst.points.at(j)).norm();
    if (d < threshold) {  // strict: a residual exactly at the threshold is out
      stats.mask[m] = true;
      ++stats.count;
      sq_sum += d * d;
    }
  }
  stats.rms = stats.count > 0 ? std::sqrt(sq_sum / stats.count) : 0.0;
  return stats;
}

RegistrationResult ransac_register(const OrientedCloud& src,
                                   const OrientedCloud& dst,
                                   const CorrespondenceSet& corrs,
                                   const RansacParams& params) {
  if (corrs.size() < 3) {
    throw Error(ErrorCode::kInsufficientCorrespondences,
                "RANSAC needs at least 3 correspondences, got " +
                    std::to_string(corrs.size()));
  }

  Rng rng(params.seed);

  // Subsample inline so the recorded indices refer to the caller's set.
  std::vector<int> used(corrs.size());
  for (std::size_t i = 0; i < used.size(); ++i) used[i] = static_cast<int>(i);
  CorrespondenceSet work = corrs;
  if (corrs.size() > static_cast<std::size_t>(params.max_correspondences)) {
    used = weighted_sample_without_replacement(
        corrs.scores, params.max_correspondences, rng);
    work.pairs.clear();
    work.scores.clear();
    for (const int i : used) {
      work.pairs.push_back(corrs.pairs[i]);
      work.scores.push_back(corrs.scores[i]);
    }
  }
  const int m = static_cast<int>(work.size());
  const bool with_scale = params.mode == TransformMode::kSim3;

  bool have_model = false;
  SimilarityTransform best_transform;
  InlierStats best_stats;
  int iterations_allowed = params.max_iterations;
  int it = 0;
  for (; it < iterations_allowed; ++it) {
    const auto sample = weighted_sample_without_replacement(work.scores, 3, rng);
    std::array<Eigen::Vector3d, 3> sp, dp;
    for (int s = 0; s < 3; ++s) {
      sp[s] = src.points.at(work.pairs[sample[s]].first);
      dp[s] = dst.points.at(work.pairs[sample[s]].second);
    }
    if (triple_is_degenerate(sp[0], sp[1], sp[2])) continue;

    SimilarityTransform hypothesis;
    try {
      hypothesis = fit_umeyama(sp, dp, {}, with_scale);
    } catch (const Error&) {
      continue;
    }
    const InlierStats stats =
        count_inliers(hypothesis, src, dst, work, params.inlier_threshold);
    if (stats.count < 3) continue;

    const bool better =
        !have_model || stats.count > best_stats.count ||
        (stats.count == best_stats.count && stats.rms < best_stats.rms);
    if (!better) continue;

    have_model = true;
    best_transform = hypothesis;
    best_stats = stats;

    // Standard adaptive bound from the inlier ratio of the best model.
    const double w = static_cast<double>(stats.count) / m;
    const double p_outlier_sample = 1.0 - w * w * w;
    if (p_outlier_sample <= 0.0) {
      iterations_allowed = it + 1;
    } else {
      const double needed =
          std::log(1.0 - params.confidence) / std::log(p_outlier_sample);
      iterations_allowed = std::min<double>(
          params.max_iterations, std::max(1.0, std::ceil(needed)));
    }
  }

  if (!have_model) {
    throw Error(ErrorCode::kNoModelFound,
                "no hypothesis reached 3 inliers in " + std::to_string(it) +
                    " iterations");
  }

  // Refit on the full inlier set, weighted by correspondence score so
  // marginal inliers near the threshold pull less than confident ones.
  // Keep the sample model if the refit is degenerate or loses inliers.
  std::vector<Eigen::Vector3d> in_src, in_dst;
  std::vector<double> in_weights;
  for (int i = 0; i < m; ++i) {
    if (!best_stats.mask[i]) continue;
    in_src.push_back(src.points.at(work.pairs[i].first));
    in_dst.push_back(dst.points.at(work.pairs[i].second));
    in_weights.push_back(work.scores[i]);
  }
  SimilarityTransform final_transform = best_transform;
  InlierStats final_stats = best_stats;
  try {
    double weight_sum = 0.0;
    for (const double w : in_weights) weight_sum += w;
    if (weight_sum <= 0.0) in_weights.assign(in_weights.size(), 1.0);
    const SimilarityTransform refit =
        fit_umeyama(in_src, in_dst, in_weights, with_scale);
    const InlierStats refit_stats =
        count_inliers(refit, src, dst, work, params.inlier_threshold);
    if (refit_stats.count > final_stats.count ||
        (refit_stats.count == final_stats.count &&
         refit_stats.rms <= final_stats.rms)) {
      final_transform = refit;
      final_stats = refit_stats;
    }
  } catch (const Error&) {
  }

  RegistrationResult result;
  result.transform = final_transform;
  result.inlier_mask = final_stats.mask;
  result.inlier_count = final_stats.count;
  result.inlier_rms = final_stats.rms;
  result.iterations = it;
  result.used_correspondence_indices = std::move(used);
  return result;
}

}  // namespace sfmreg
