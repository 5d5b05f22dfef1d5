#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfmreg/dataset.hpp"

namespace sfmreg {

double pose_distance(const PosedImage& a, const PosedImage& b, double w,
                     double diameter) {
  const Eigen::Matrix3d ra = a.rotation.toRotationMatrix();
  const Eigen::Matrix3d rb = b.rotation.toRotationMatrix();
  const double cos_angle =
      std::clamp(((ra * rb.transpose()).trace() - 1.0) / 2.0, -1.0, 1.0);
  const double geodesic = std::acos(cos_angle);
  const double euclidean = (a.center() - b.center()).norm();
  return w * (geodesic / std::numbers::pi) + (1.0 - w) * (euclidean / diameter);
}

double scene_diameter(const Reconstruction& recon) {
  std::vector<Eigen::Vector3d> centers;
  centers.reserve(recon.images.size());
  for (const auto& [id, image] : recon.images) centers.push_back(image.center());
  double best = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      best = std::max(best, (centers[i] - centers[j]).norm());
    }
  }
  return best > 0.0 ? best : 1.0;
}

Trajectory generate_trajectory(const std::map<int, PosedImage>& images,
                               std::vector<int>& remaining,
                               const TrajectoryParams& params, Rng& rng,
                               double diameter) {
  if (remaining.empty()) {
    throw Error(ErrorCode::kEmptyIndexSet, "no images left to start from");
  }
  if (params.n_low < 1 || params.n_high < params.n_low) {
    throw Error(ErrorCode::kInvalidArgument, "bad trajectory length bounds");
  }

  std::sort(remaining.begin(), remaining.end());

  // Draw order is part of the determinism contract: start, length, weight.
  const std::size_t start_pos = rng.below(remaining.size());
  const int n =
      static_cast<int>(rng.uniform_int(params.n_low, params.n_high));
  const double w = rng.uniform01();

  Trajectory out;
  out.weight_w = w;
  int current = remaining[start_pos];
  out.image_ids.push_back(current);
  remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(start_pos));

  // The start counts towards the target size n.
  while (static_cast<int>(out.image_ids.size()) < n && !remaining.empty()) {
    const PosedImage& current_image = images.at(current);
    int best_id = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const int candidate : remaining) {  // ascending ids; ties keep first
      const double d =
          pose_distance(current_image, images.at(candidate), w, diameter);
      if (d < best_dist) {
        best_dist = d;
        best_id = candidate;
      }
    }
    out.image_ids.push_back(best_id);
    remaining.erase(std::find(remaining.begin(), remaining.end(), best_id));
    current = best_id;
  }
  return out;
}

Trajectory generate_trajectory(const std::map<int, PosedImage>& images,
                               std::vector<int>& remaining,
                               const TrajectoryParams& params,
                               std::uint64_t seed, double diameter) {
  Rng rng(seed);
  return generate_trajectory(images, remaining, params, rng, diameter);
}

std::vector<Trajectory> generate_all_trajectories(const Reconstruction& recon,
                                                  const TrajectoryParams& params,
                                                  std::uint64_t seed) {
  std::vector<int> remaining;
  remaining.reserve(recon.images.size());
  for (const auto& [id, image] : recon.images) remaining.push_back(id);

  const double diameter = scene_diameter(recon);
  Rng rng(seed);
  std::vector<Trajectory> out;
  while (static_cast<int>(remaining.size()) >= params.n_low) {
    Trajectory traj =
        generate_trajectory(recon.images, remaining, params, rng, diameter);
    if (static_cast<int>(traj.image_ids.size()) >= params.n_low) {
      out.push_back(std::move(traj));
    }
  }
  return out;
}

}  // namespace sfmreg
