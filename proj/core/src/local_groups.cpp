#include <optional>

#include "sfmreg/matching.hpp"

namespace sfmreg {

namespace {

// g nearest cloud rows to the given center, padded by repeating the
// nearest point when the cloud is smaller than g.
void fill_group(const OrientedCloud& cloud, const KdTree& index, int center,
                int g, std::vector<int>& rows, std::vector<bool>& padding) {
  const int available = std::min<int>(g, static_cast<int>(cloud.size()));
  const auto neighbors = index.knn(cloud.points[center], available);
  rows.resize(g);
  padding.assign(g, false);
  for (int r = 0; r < available; ++r) rows[r] = neighbors[r].index;
  for (int r = available; r < g; ++r) {
    rows[r] = neighbors[0].index;
    padding[r] = true;
  }
}

}  // namespace

LocalGroupPair extract_local_groups(const OrientedCloud& cloud_p,
                                    const OrientedCloud& cloud_q,
                                    const SuperpointSet& sp_p,
                                    const SuperpointSet& sp_q,
                                    const CoarseCorrespondences& coarse,
                                    int group_size, const KdTree* index_p,
                                    const KdTree* index_q) {
  if (group_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "group_size must be >= 1");
  }
  std::optional<KdTree> local_p, local_q;
  if (!index_p) local_p.emplace(cloud_p.points);
  if (!index_q) local_q.emplace(cloud_q.points);
  const KdTree& tree_p = index_p ? *index_p : *local_p;
  const KdTree& tree_q = index_q ? *index_q : *local_q;

  LocalGroupPair out;
  out.group_size = group_size;
  out.src_indices.resize(coarse.size());
  out.dst_indices.resize(coarse.size());
  out.src_padding.resize(coarse.size());
  out.dst_padding.resize(coarse.size());
  for (std::size_t r = 0; r < coarse.size(); ++r) {
    const auto [ip, iq] = coarse.pairs[r];
    fill_group(cloud_p, tree_p, sp_p.indices.at(ip), group_size,
               out.src_indices[r], out.src_padding[r]);
    fill_group(cloud_q, tree_q, sp_q.indices.at(iq), group_size,
               out.dst_indices[r], out.dst_padding[r]);
  }
  return out;
}

}  // namespace sfmreg
