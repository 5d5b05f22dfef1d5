#pragma once

#include <cstdint>

#include "sfmreg/reconstruction.hpp"
#include "sfmreg/types.hpp"

namespace sfmreg {

/// Per-point normal as the smallest-eigenvalue eigenvector of the
/// covariance of the k nearest neighbors (the point itself included, so
/// k = 33 means 33 points total). Normals are unit length; the sign is
/// canonical (largest-magnitude component positive) but carries no
/// meaning until oriented. Throws TooFewPoints when the cloud has fewer
/// than k points.
/// Per-point work is independent and written to preallocated slots, so the
/// result does not depend on jobs.
OrientedCloud estimate_normals(const OrientedCloud& cloud, int k = 33,
                               int jobs = 1);

/// Flips each normal towards the camera center of one observing image,
/// chosen by the seeded generator from the point's track: the normal is
/// negated when its dot product with (center - point) is negative.
/// Requires cloud rows to map to reconstruction points (source_point_ids)
/// with non-empty tracks. Throws MissingTrack / MissingNormals.
OrientedCloud orient_normals(const Reconstruction& recon,
                             const OrientedCloud& cloud, std::uint64_t seed);

}  // namespace sfmreg
