#pragma once

#include <Eigen/Core>
#include <span>
#include <tuple>
#include <vector>

#include "sfmreg/types.hpp"

namespace sfmreg {

/// Maps points p -> s*R*p + t and normals n -> R*n (scale and translation
/// do not act on directions).
OrientedCloud apply_transform(const SimilarityTransform& T,
                              const OrientedCloud& cloud);

/// compose(A, B) applies B first, then A: x -> A(B(x)).
SimilarityTransform compose(const SimilarityTransform& a,
                            const SimilarityTransform& b);

SimilarityTransform invert(const SimilarityTransform& T);

/// Verifies R is orthonormal with det +1 within tolerance; throws
/// NotARotation otherwise.
void check_rotation(const Eigen::Matrix3d& R, double tol = 1e-6);

/// Weighted closed-form least-squares alignment: finds (s, R, t)
/// minimizing sum_i w_i * ||dst_i - (s*R*src_i + t)||^2 via SVD of the
/// weighted cross-covariance, with the determinant sign corrected so that
/// det(R) = +1. with_scale = false pins s = 1.
///
/// Throws DegenerateConfiguration when the weighted centered source has
/// rank < 2 (collinear or coincident points), and InvalidArgument on
/// malformed inputs (fewer than 3 points, negative or all-zero weights).
SimilarityTransform fit_umeyama(std::span<const Eigen::Vector3d> src,
                                std::span<const Eigen::Vector3d> dst,
                                std::span<const double> weights = {},
                                bool with_scale = true);

/// Largest singular value of the centered N x 3 point matrix, scaled by
/// 1/sqrt(N) so the value measures the spread along the principal axis
/// independently of the point count.
double centered_spectral_norm(const OrientedCloud& cloud);

struct NormalizedPair {
  OrientedCloud p;
  OrientedCloud q;
  NormalizationInfo info_p;
  NormalizationInfo info_q;
};

/// Centers each cloud at its own centroid and divides by a per-mode
/// divisor: Sim3 divides P by sigma_P/sqrt(2) and Q by sigma_Q/sqrt(2)
/// (sigma = centered_spectral_norm), which removes relative scale; SE3
/// divides both by sigma_P, which preserves it. Throws DegenerateCloud
/// when sigma is zero (all points identical).
NormalizedPair normalize_pair(const OrientedCloud& p, const OrientedCloud& q,
                              TransformMode mode);

/// Transform that maps raw coordinates into the normalized frame
/// described by info: x -> (x - centroid) / divisor.
SimilarityTransform to_normalized_frame(const NormalizationInfo& info);

/// Expresses a transform acting between two raw frames in the
/// corresponding normalized frames: N_dst o T o N_src^-1.
SimilarityTransform conjugate_to_normalized(const SimilarityTransform& T,
                                            const NormalizationInfo& info_src,
                                            const NormalizationInfo& info_dst);

/// Inverse of conjugate_to_normalized: N_dst^-1 o T o N_src.
SimilarityTransform conjugate_from_normalized(const SimilarityTransform& T,
                                              const NormalizationInfo& info_src,
                                              const NormalizationInfo& info_dst);

}  // namespace sfmreg
