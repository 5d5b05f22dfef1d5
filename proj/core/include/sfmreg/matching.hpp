#pragma once

#include <Eigen/Core>
#include <vector>

#include "sfmreg/features.hpp"
#include "sfmreg/types.hpp"

namespace sfmreg {

/// Top-k superpoint correspondences, scores descending in [0,1].
struct CoarseCorrespondences {
  std::vector<std::pair<int, int>> pairs;  // (row in P', row in Q')
  std::vector<double> scores;

  std::size_t size() const { return pairs.size(); }
};

/// Mutual neighbor rank used by the coarse filter: a pair survives when
/// each side ranks the other within its top `mutual_rank` by descriptor
/// similarity.
struct CoarseMatchParams {
  int k = 256;
  int mutual_rank = 3;
  /// Minimum (1+sim)/2 score, strict >. Orthogonal descriptors score 0.5.
  double min_score = 0.5;
};

/// Ranks all descriptor pairs by dot-product similarity, keeps pairs that
/// pass the mutual top-`mutual_rank` filter and the score threshold, and
/// returns the best k. Scores are (1+sim)/2. Throws NoSurvivingPairs when
/// the filter eliminates everything.
CoarseCorrespondences coarse_match(const DescriptorTable& desc_p,
                                   const DescriptorTable& desc_q,
                                   const CoarseMatchParams& params);

/// Per coarse pair, the g nearest cloud points to each of the two
/// superpoints. When the cloud holds fewer than g points, rows are padded
/// by repeating the nearest point and the pad mask marks the repeats.
struct LocalGroupPair {
  int group_size = 0;                          // g
  std::vector<std::vector<int>> src_indices;   // k rows of g cloud rows
  std::vector<std::vector<int>> dst_indices;
  std::vector<std::vector<bool>> src_padding;  // true where padded
  std::vector<std::vector<bool>> dst_padding;

  std::size_t size() const { return src_indices.size(); }
};

LocalGroupPair extract_local_groups(const OrientedCloud& cloud_p,
                                    const OrientedCloud& cloud_q,
                                    const SuperpointSet& sp_p,
                                    const SuperpointSet& sp_q,
                                    const CoarseCorrespondences& coarse,
                                    int group_size = 64,
                                    const KdTree* index_p = nullptr,
                                    const KdTree* index_q = nullptr);

/// Entropy-regularized transport plan over one local group, with one slack
/// row and column absorbing unmatched mass.
struct TransportPlan {
  Eigen::MatrixXd plan;  // (g+1) x (g+1), nonnegative
  bool converged = false;
  int iterations_used = 0;
};

/// Interior scores are -cost/temperature <= 0 for nonnegative costs, so
/// the slack score must be negative: it is the score level below which a
/// point prefers staying unmatched (slack_score * temperature in cost
/// units). A positive slack would outbid every interior cell and drain
/// the whole plan.
struct SinkhornParams {
  int iterations = 100;
  double temperature = 0.05;
  double slack_score = -7.0;
  double marginal_tolerance = 1e-6;
};

/// Log-domain Sinkhorn on the augmented score matrix: interior scores are
/// -cost/temperature, the slack row/column is filled with slack_score.
/// Unmasked interior rows and columns have target marginal 1; the slack
/// row/column absorbs the count of unmasked columns/rows. Masked entries
/// are excluded from the problem and get zero plan mass. Converged when
/// the largest marginal violation drops below marginal_tolerance.
/// Throws NonFiniteCost.
TransportPlan sinkhorn(const Eigen::MatrixXd& cost,
                       const std::vector<bool>& row_mask,
                       const std::vector<bool>& col_mask,
                       const SinkhornParams& params);

/// Within each group, interior cells that are simultaneously the argmax of
/// their row and their column and carry at least confidence_min mass
/// become correspondences (cloud-row indices). Duplicates across groups
/// keep the highest score; the reduction order is fixed, so the result is
/// deterministic.
CorrespondenceSet extract_matches(const LocalGroupPair& groups,
                                  const std::vector<TransportPlan>& plans,
                                  double confidence_min = 0.1);

}  // namespace sfmreg
