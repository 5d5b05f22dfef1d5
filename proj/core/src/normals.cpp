#include <Eigen/Eigenvalues>
#include <cmath>

#include "sfmreg/kdtree.hpp"
#include "sfmreg/normals.hpp"
#include "sfmreg/parallel.hpp"
#include "sfmreg/rng.hpp"

namespace sfmreg {

namespace {

// Canonical sign: make the largest-magnitude component positive so the
// estimate is reproducible before orientation.
Eigen::Vector3d canonical_sign(const Eigen::Vector3d& n) {
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (std::abs(n[a]) > std::abs(n[axis])) axis = a;
  }
  return n[axis] < 0.0 ? Eigen::Vector3d(-n) : n;
}

}  // namespace

OrientedCloud estimate_normals(const OrientedCloud& cloud, int k, int jobs) {
  validate_cloud(cloud);
  if (k < 3) throw Error(ErrorCode::kInvalidArgument, "k must be >= 3");
  if (cloud.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kTooFewPoints,
                "normal estimation needs " + std::to_string(k) +
                    " points, cloud has " + std::to_string(cloud.size()));
  }

  const KdTree index(cloud.points);
  OrientedCloud out = cloud;
  out.normals.resize(cloud.size());
  parallel_for(cloud.size(), jobs, [&](std::size_t i) {
    const auto neighbors = index.knn(cloud.points[i], k);
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& nb : neighbors) mean += cloud.points[nb.index];
    mean /= static_cast<double>(neighbors.size());

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& nb : neighbors) {
      const Eigen::Vector3d d = cloud.points[nb.index] - mean;
      cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    // Eigenvalues ascending; column 0 is the surface normal direction.
    out.normals[i] = canonical_sign(eig.eigenvectors().col(0).normalized());
  });
  return out;
}

OrientedCloud orient_normals(const Reconstruction& recon,
                             const OrientedCloud& cloud, std::uint64_t seed) {
  if (!cloud.has_normals()) {
    throw Error(ErrorCode::kMissingNormals, "orient_normals needs normals");
  }
  if (cloud.source_point_ids.size() != cloud.size()) {
    throw Error(ErrorCode::kMissingTrack,
                "cloud rows do not map to reconstruction points");
  }

  OrientedCloud out = cloud;
  Rng rng(seed);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto it = recon.points.find(cloud.source_point_ids[i]);
    if (it == recon.points.end() || it->second.track.empty()) {
      throw Error(ErrorCode::kMissingTrack,
                  "point " + std::to_string(cloud.source_point_ids[i]) +
                      " has no track");
    }
    const auto& track = it->second.track;
    const auto& ob = track[rng.below(track.size())];
    const auto image = recon.images.find(ob.image_id);
    if (image == recon.images.end()) {
      throw Error(ErrorCode::kMissingTrack,
                  "track references missing image " +
                      std::to_string(ob.image_id));
    }
    const Eigen::Vector3d towards = image->second.center() - cloud.points[i];
    if (out.normals[i].dot(towards) < 0.0) out.normals[i] = -out.normals[i];
  }
  return out;
}

}  // namespace sfmreg
