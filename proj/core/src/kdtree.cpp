#include "sfmreg/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "sfmreg/error.hpp"

namespace sfmreg {

namespace {

// (squared distance, index) with lexicographic order; lower index wins ties.
using Cand = std::pair<double, int>;

double sq_dist(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return (a - b).squaredNorm();
}

}  // namespace

KdTree::KdTree(std::span<const Eigen::Vector3d> points, int leaf_size)
    : points_(points.begin(), points.end()), leaf_size_(std::max(1, leaf_size)) {
  if (points_.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "kd-tree needs at least one point");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].allFinite()) {
      throw Error(ErrorCode::kNonFinitePoint,
                  "point " + std::to_string(i) + " is not finite");
    }
  }
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  nodes_.reserve(2 * points_.size() / leaf_size_ + 2);
  root_ = build_node(0, static_cast<int>(points_.size()));
}

int KdTree::build_node(int begin, int end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= leaf_size_) {
    return id;
  }

  Eigen::Vector3d lo = points_[order_[begin]];
  Eigen::Vector3d hi = lo;
  for (int i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  const Eigen::Vector3d extent = hi - lo;
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (extent[a] > extent[axis]) axis = a;  // strict >, ties keep lower axis
  }
  if (extent[axis] == 0.0) {
    // All points coincide; keep as a (possibly oversized) leaf.
    return id;
  }

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](int a, int b) {
                     const double ca = points_[a][axis];
                     const double cb = points_[b][axis];
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });
  nodes_[id].axis = axis;
  nodes_[id].split = points_[order_[mid]][axis];
  const int left = build_node(begin, mid);
  const int right = build_node(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<Neighbor> KdTree::knn(const Eigen::Vector3d& query, int k) const {
  if (k <= 0) return {};
  if (static_cast<std::size_t>(k) > points_.size()) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " exceeds point count " +
                    std::to_string(points_.size()));
  }

  // Max-heap of the current best k candidates; top is the worst kept.
  std::priority_queue<Cand> heap;

  auto visit = [&](auto&& self, int id) -> void {
    const Node& node = nodes_[id];
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        const Cand cand{sq_dist(points_[idx], query), idx};
        if (heap.size() < static_cast<std::size_t>(k)) {
          heap.push(cand);
        } else if (cand < heap.top()) {
          heap.pop();
          heap.push(cand);
        }
      }
      return;
    }
    const double delta = query[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    self(self, near);
    // Descend into far unless the splitting plane is strictly farther than
    // the current worst candidate (equal distance may still swap in a
    // lower index).
    if (heap.size() < static_cast<std::size_t>(k) ||
        delta * delta <= heap.top().first) {
      self(self, far);
    }
  };
  visit(visit, root_);

  std::vector<Neighbor> result(heap.size());
  for (std::size_t i = heap.size(); i-- > 0;) {
    const Cand c = heap.top();
    heap.pop();
    result[i] = Neighbor{c.second, std::sqrt(c.first)};
  }
  return result;
}

std::vector<Neighbor> KdTree::radius(const Eigen::Vector3d& query,
                                     double r) const {
  if (r < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "radius must be >= 0");
  }
  const double r2 = r * r;
  std::vector<Cand> hits;
  std::vector<int> stack;
  stack.push_back(root_);
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    const Node& node = nodes_[id];
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        const double d2 = sq_dist(points_[idx], query);
        if (d2 <= r2) hits.emplace_back(d2, idx);
      }
      continue;
    }
    const double delta = query[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    if (delta * delta <= r2) stack.push_back(far);
    stack.push_back(near);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<Neighbor> result(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    result[i] = Neighbor{hits[i].second, std::sqrt(hits[i].first)};
  }
  return result;
}

double KdTree::nearest_distance(const Eigen::Vector3d& query) const {
  return knn(query, 1)[0].distance;
}

}  // namespace sfmreg
