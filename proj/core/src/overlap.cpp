#include <cmath>

#include "sfmreg/dataset.hpp"
#include "sfmreg/geometry.hpp"
#include "sfmreg/kdtree.hpp"

namespace sfmreg {

namespace {

// Fraction of src points whose mapped position has a dst neighbor within
// tau (inclusive), measured in dst's frame.
double directional_iou(const OrientedCloud& src, const KdTree& dst_index,
                       const SimilarityTransform& T, double tau) {
  std::size_t hits = 0;
  for (const auto& p : src.points) {
    if (dst_index.nearest_distance(T(p)) <= tau) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(src.size());
}

}  // namespace

double compute_overlap(const OrientedCloud& p, const OrientedCloud& q,
                       const SimilarityTransform& T, double tau) {
  if (p.points.empty() || q.points.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "overlap needs two nonempty clouds");
  }
  const KdTree index_p(p.points);
  const KdTree index_q(q.points);
  const double iou_pq = directional_iou(p, index_q, T, tau);
  const double iou_qp = directional_iou(q, index_p, invert(T), tau);
  return std::sqrt(iou_pq * iou_qp);
}

}  // namespace sfmreg
