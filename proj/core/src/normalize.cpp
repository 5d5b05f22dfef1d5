#include <Eigen/Dense>
#include <cmath>

#include "sfmreg/geometry.hpp"

namespace sfmreg {

namespace {

Eigen::Vector3d centroid_of(const OrientedCloud& cloud) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& pt : cloud.points) c += pt;
  return c / static_cast<double>(cloud.size());
}

OrientedCloud shift_and_scale(const OrientedCloud& cloud,
                              const NormalizationInfo& info) {
  OrientedCloud result;
  result.points.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    result.points[i] = (cloud.points[i] - info.centroid) / info.divisor;
  }
  result.normals = cloud.normals;  // directions are normalization-invariant
  result.source_point_ids = cloud.source_point_ids;
  return result;
}

}  // namespace

double centered_spectral_norm(const OrientedCloud& cloud) {
  const std::size_t n = cloud.points.size();
  const Eigen::Vector3d centroid = centroid_of(cloud);
  Eigen::MatrixXd centered(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    centered.row(i) = (cloud.points[i] - centroid).transpose();
  }
  // The 1/sqrt(N) factor makes the value independent of the point count:
  // it is the spread along the principal axis, and it keeps every
  // normalized-frame threshold (inlier tau, overlap tau, recall bounds)
  // meaningful for clouds of any size.
  return centered.jacobiSvd().singularValues()(0) /
         std::sqrt(static_cast<double>(n));
}

NormalizedPair normalize_pair(const OrientedCloud& p, const OrientedCloud& q,
                              TransformMode mode) {
  if (p.size() < 2 || q.size() < 2) {
    throw Error(ErrorCode::kDegenerateCloud,
                "normalization needs at least 2 points per cloud");
  }

  const double sigma_p = centered_spectral_norm(p);
  const double sigma_q = centered_spectral_norm(q);
  if (sigma_p <= 0.0 || (mode == TransformMode::kSim3 && sigma_q <= 0.0)) {
    throw Error(ErrorCode::kDegenerateCloud, "all points identical (sigma=0)");
  }

  NormalizedPair out;
  out.info_p.centroid = centroid_of(p);
  out.info_q.centroid = centroid_of(q);
  out.info_p.mode = mode;
  out.info_q.mode = mode;
  if (mode == TransformMode::kSim3) {
    out.info_p.divisor = sigma_p / std::sqrt(2.0);
    out.info_q.divisor = sigma_q / std::sqrt(2.0);
  } else {
    out.info_p.divisor = sigma_p;
    out.info_q.divisor = sigma_p;
  }
  out.p = shift_and_scale(p, out.info_p);
  out.q = shift_and_scale(q, out.info_q);
  return out;
}

}  // namespace sfmreg
