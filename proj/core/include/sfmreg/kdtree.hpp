#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace sfmreg {

/// A query hit: point index and Euclidean distance to the query.
struct Neighbor {
  int index;
  double distance;
};

/// Static kd-tree over an immutable 3D point set. Results are exact and
/// deterministic: the tree is an accelerator, never an approximation, and
/// any (query, k) returns the same neighbors a brute-force scan would,
/// with distance ties broken towards the lower point index.
///
/// Build splits at the median of the widest-extent axis (ties towards the
/// lower axis index) until a node holds at most leaf_size points. Queries
/// are const and safe to run concurrently.
class KdTree {
 public:
  explicit KdTree(std::span<const Eigen::Vector3d> points, int leaf_size = 16);

  /// k nearest neighbors, ascending by (distance, index). Throws KTooLarge
  /// if k exceeds the number of indexed points.
  std::vector<Neighbor> knn(const Eigen::Vector3d& query, int k) const;

  /// All points with distance <= radius, ascending by (distance, index).
  std::vector<Neighbor> radius(const Eigen::Vector3d& query, double r) const;

  /// Distance to the single nearest neighbor (convenience for overlap
  /// counting).
  double nearest_distance(const Eigen::Vector3d& query) const;

  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    int left = -1;    // child node ids, -1 for leaf
    int right = -1;
    int axis = 0;
    double split = 0.0;
    int begin = 0;    // range into order_ (leaves only)
    int end = 0;
  };

  int build_node(int begin, int end);

  std::vector<Eigen::Vector3d> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
  int leaf_size_;
};

}  // namespace sfmreg
