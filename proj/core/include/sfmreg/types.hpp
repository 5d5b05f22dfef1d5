#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "sfmreg/error.hpp"

namespace sfmreg {

/// Similarity transform x -> s * R * x + t with s > 0 and R a proper
/// rotation. Defaults to the identity.
struct SimilarityTransform {
  double scale = 1.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d operator()(const Eigen::Vector3d& x) const {
    return scale * (rotation * x) + translation;
  }
};

enum class TransformMode { kSE3, kSim3 };

const char* transform_mode_name(TransformMode mode);
TransformMode parse_transform_mode(const std::string& name);

/// Point cloud with optional per-point unit normals. Rows of `points` and
/// `normals` correspond; `source_point_ids` maps each row back to the 3D
/// point id of the reconstruction it was extracted from (-1 if unknown).
struct OrientedCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> normals;  // empty or same size as points
  std::vector<std::int64_t> source_point_ids;

  std::size_t size() const { return points.size(); }
  bool has_normals() const { return !normals.empty(); }
};

/// Checks cloud invariants: nonempty, finite coordinates, normals (when
/// present) unit length and parallel to points. Throws on violation.
void validate_cloud(const OrientedCloud& cloud);

struct NormalizationInfo {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  double divisor = 1.0;
  TransformMode mode = TransformMode::kSE3;
};

/// Index correspondences between two clouds with a confidence score per
/// pair. pairs[m] = (row in source cloud, row in destination cloud).
struct CorrespondenceSet {
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> scores;

  std::size_t size() const { return pairs.size(); }
};

}  // namespace sfmreg
