#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "sfmreg/geometry.hpp"

namespace sfmreg {

const char* transform_mode_name(TransformMode mode) {
  return mode == TransformMode::kSE3 ? "se3" : "sim3";
}

TransformMode parse_transform_mode(const std::string& name) {
  if (name == "se3" || name == "SE3") return TransformMode::kSE3;
  if (name == "sim3" || name == "Sim3") return TransformMode::kSim3;
  throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + name + "'");
}

void validate_cloud(const OrientedCloud& cloud) {
  if (cloud.points.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "cloud has no points");
  }
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (!cloud.points[i].allFinite()) {
      throw Error(ErrorCode::kNonFinitePoint,
                  "point " + std::to_string(i) + " is not finite");
    }
  }
  if (cloud.has_normals()) {
    if (cloud.normals.size() != cloud.points.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "normals size " + std::to_string(cloud.normals.size()) +
                      " != points size " + std::to_string(cloud.points.size()));
    }
    for (std::size_t i = 0; i < cloud.normals.size(); ++i) {
      if (std::abs(cloud.normals[i].norm() - 1.0) > 1e-6) {
        throw Error(ErrorCode::kInvalidArgument,
                    "normal " + std::to_string(i) + " is not unit length");
      }
    }
  }
  if (!cloud.source_point_ids.empty() &&
      cloud.source_point_ids.size() != cloud.points.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "source_point_ids size mismatch");
  }
}

OrientedCloud apply_transform(const SimilarityTransform& T,
                              const OrientedCloud& cloud) {
  OrientedCloud out;
  out.points.resize(cloud.points.size());
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    out.points[i] = T(cloud.points[i]);
  }
  out.normals.resize(cloud.normals.size());
  for (std::size_t i = 0; i < cloud.normals.size(); ++i) {
    out.normals[i] = T.rotation * cloud.normals[i];
  }
  out.source_point_ids = cloud.source_point_ids;
  return out;
}

SimilarityTransform compose(const SimilarityTransform& a,
                            const SimilarityTransform& b) {
  SimilarityTransform out;
  out.scale = a.scale * b.scale;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.scale * (a.rotation * b.translation) + a.translation;
  return out;
}

SimilarityTransform invert(const SimilarityTransform& T) {
  SimilarityTransform out;
  out.scale = 1.0 / T.scale;
  out.rotation = T.rotation.transpose();
  out.translation = -out.scale * (out.rotation * T.translation);
  return out;
}

void check_rotation(const Eigen::Matrix3d& R, double tol) {
  const double ortho =
      (R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (!(ortho < tol) || !(R.determinant() > 0.0)) {
    throw Error(ErrorCode::kNotARotation,
                "matrix is not a proper rotation (orthogonality residual " +
                    std::to_string(ortho) + ")");
  }
}

SimilarityTransform to_normalized_frame(const NormalizationInfo& info) {
  SimilarityTransform out;
  out.scale = 1.0 / info.divisor;
  out.rotation = Eigen::Matrix3d::Identity();
  out.translation = -info.centroid / info.divisor;
  return out;
}

SimilarityTransform conjugate_to_normalized(const SimilarityTransform& T,
                                            const NormalizationInfo& info_src,
                                            const NormalizationInfo& info_dst) {
  return compose(to_normalized_frame(info_dst),
                 compose(T, invert(to_normalized_frame(info_src))));
}

SimilarityTransform conjugate_from_normalized(
    const SimilarityTransform& T, const NormalizationInfo& info_src,
    const NormalizationInfo& info_dst) {
  return compose(invert(to_normalized_frame(info_dst)),
                 compose(T, to_normalized_frame(info_src)));
}

}  // namespace sfmreg
