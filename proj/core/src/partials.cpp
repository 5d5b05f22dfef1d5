#include <algorithm>
#include <set>

#include "sfmreg/dataset.hpp"
#include "sfmreg/geometry.hpp"
#include "sfmreg/normals.hpp"

namespace sfmreg {

std::vector<std::vector<int>> sample_partial_random_points(
    const Reconstruction& recon, int target_images, int n_partials,
    std::uint64_t seed) {
  if (recon.points.empty()) {
    throw Error(ErrorCode::kEmptyReconstruction, "reconstruction has no points");
  }
  if (target_images < 1 || n_partials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad partial sampling parameters");
  }

  std::vector<std::int64_t> all_points;
  all_points.reserve(recon.points.size());
  for (const auto& [id, point] : recon.points) all_points.push_back(id);

  std::vector<std::vector<int>> out;
  out.reserve(n_partials);
  for (int p = 0; p < n_partials; ++p) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
    std::vector<std::int64_t> unseen = all_points;
    std::set<int> subset;
    while (static_cast<int>(subset.size()) < target_images && !unseen.empty()) {
      const std::size_t pick = rng.below(unseen.size());
      const std::int64_t point_id = unseen[pick];
      unseen[pick] = unseen.back();
      unseen.pop_back();
      for (const auto& ob : recon.points.at(point_id).track) {
        subset.insert(ob.image_id);
      }
    }
    out.emplace_back(subset.begin(), subset.end());
  }
  return out;
}

PartialReconstruction build_partial(const Reconstruction& recon,
                                    const std::vector<int>& image_ids,
                                    const BuildPartialParams& params) {
  if (image_ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty image subset");
  }
  const Reconstruction sub =
      restrict_to_images(recon, image_ids, params.min_track);
  if (sub.points.empty()) {
    throw Error(ErrorCode::kEmptyPartial,
                "no point has >= " + std::to_string(params.min_track) +
                    " observations inside the subset");
  }

  PartialReconstruction out;
  out.parent = &recon;
  out.image_ids = image_ids;
  std::sort(out.image_ids.begin(), out.image_ids.end());
  out.cloud = extract_cloud(sub);
  out.point_ids = out.cloud.source_point_ids;

  // Tiny partials cannot support the full neighborhood; clamp k.
  const int k = std::min<int>(params.normals_k,
                              static_cast<int>(out.cloud.size()));
  if (k >= 3) {
    out.cloud = estimate_normals(out.cloud, k);
    out.cloud = orient_normals(sub, out.cloud, params.orient_seed);
  }
  return out;
}

OrientedCloud perturbed_cloud(const PartialReconstruction& partial_b,
                              const PairEntry& entry) {
  return apply_transform(entry.gt, partial_b.cloud);
}

}  // namespace sfmreg
