#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "sfmreg/kdtree.hpp"
#include "sfmreg/types.hpp"

namespace sfmreg {

/// Point pair feature [ ||d||, angle(n1,d), angle(n2,d), angle(n1,n2) ]
/// with d = p2 - p1. Angles are in [0, pi]. Invariant under any rotation
/// applied jointly to both points and both normals. When the points
/// coincide (d = 0) the direction angles are undefined; they are set to
/// angle(n1,n2) and the coincident flag is raised.
struct Ppf {
  double dist = 0.0;
  double angle_n1_d = 0.0;
  double angle_n2_d = 0.0;
  double angle_n1_n2 = 0.0;
  bool coincident = false;
};

Ppf make_ppf(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2,
             const Eigen::Vector3d& n1, const Eigen::Vector3d& n2);

/// Angle between two vectors via atan2(||a x b||, a.b); always in [0, pi].
double vector_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

struct SuperpointSet {
  std::vector<int> indices;  // rows into the cloud, selection order
  double radius = 0.0;       // descriptor support used with this set
};

/// Farthest point sampling: the start index is drawn by the seeded
/// generator, then points are added greedily by largest distance to the
/// selected set (ties towards the lower index). Deterministic under a
/// fixed seed.
SuperpointSet sample_superpoints(const OrientedCloud& cloud, int n_prime,
                                 std::uint64_t seed);

enum class DescriptorSource { kPpfHistogram, kImported };

struct DescriptorTable {
  Eigen::MatrixXd vectors;  // one L2-normalized row per superpoint
  DescriptorSource source = DescriptorSource::kPpfHistogram;
  /// Rows whose support neighborhood was empty (uniform fallback vector).
  std::vector<bool> empty_neighborhood;

  Eigen::Index rows() const { return vectors.rows(); }
  Eigen::Index dim() const { return vectors.cols(); }
};

struct PpfDescriptorParams {
  double radius = 0.15;   // support radius in normalized units
  int distance_bins = 5;  // over [0, radius]
  int angle_bins = 9;     // over [0, pi], per angle channel
  bool knn_support = false;  // use support_k nearest neighbors instead of
                             // the radius ball
  int support_k = 64;

  int dim() const { return distance_bins + 3 * angle_bins; }
};

/// Local PPF histogram descriptor per superpoint: PPFs between the
/// superpoint and every neighbor in its support are histogrammed with
/// distance_bins over [0, radius] and angle_bins over [0, pi] per angle
/// channel, concatenated and L2-normalized. An empty neighborhood yields
/// the uniform vector 1/sqrt(dim) and is flagged. Requires normals.
DescriptorTable ppf_histogram_descriptors(const OrientedCloud& cloud,
                                          const SuperpointSet& superpoints,
                                          const PpfDescriptorParams& params,
                                          const KdTree* index = nullptr,
                                          int jobs = 1);

/// Same histogram computed for every cloud point (used for the fine
/// matching cost inside local groups, with a smaller support radius).
DescriptorTable ppf_point_descriptors(const OrientedCloud& cloud,
                                      const PpfDescriptorParams& params,
                                      const KdTree* index = nullptr,
                                      int jobs = 1);

/// Loads externally computed descriptors for the given superpoints. Rows
/// are L2-normalized on load. Throws RowCountMismatch when the file row
/// count differs from |superpoints| and DimensionMismatch on a malformed
/// payload.
DescriptorTable import_features(const std::filesystem::path& path,
                                const SuperpointSet& superpoints);

}  // namespace sfmreg
