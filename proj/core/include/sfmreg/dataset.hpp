#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfmreg/reconstruction.hpp"
#include "sfmreg/rng.hpp"
#include "sfmreg/types.hpp"

namespace sfmreg {

/// Weighted pose distance used by trajectory generation:
///   w * (geodesic rotation angle / pi)
///     + (1-w) * (camera center distance / scene_diameter).
/// The acos argument is clamped to [-1, 1].
double pose_distance(const PosedImage& a, const PosedImage& b, double w,
                     double scene_diameter);

/// Largest pairwise camera-center distance, computed once per scene.
double scene_diameter(const Reconstruction& recon);

struct TrajectoryParams {
  int n_low = 75;
  int n_high = 300;
};

struct Trajectory {
  std::vector<int> image_ids;  // visit order
  double weight_w = 0.5;       // rotation/translation mix of this trajectory
};

/// Greedy nearest-neighbor walk over the remaining image set: the start is
/// drawn uniformly from `remaining`, the target length uniformly from
/// {n_low..n_high}, and the per-trajectory distance weight from U[0,1];
/// each step appends the remaining image closest to the current one (ties
/// towards the smaller id) and removes it from `remaining`. Stops early
/// when the pool empties. Draw order is start, length, weight; all draws
/// come from `rng`. Throws EmptyIndexSet.
Trajectory generate_trajectory(const std::map<int, PosedImage>& images,
                               std::vector<int>& remaining,
                               const TrajectoryParams& params, Rng& rng,
                               double diameter);

/// Seeded convenience overload for a single trajectory.
Trajectory generate_trajectory(const std::map<int, PosedImage>& images,
                               std::vector<int>& remaining,
                               const TrajectoryParams& params,
                               std::uint64_t seed, double diameter);

/// Repeats generate_trajectory until fewer than n_low images remain;
/// trajectories that end up shorter than n_low are discarded. The
/// resulting id sets are pairwise disjoint.
std::vector<Trajectory> generate_all_trajectories(const Reconstruction& recon,
                                                  const TrajectoryParams& params,
                                                  std::uint64_t seed);

/// Image subsets grown by repeatedly drawing an unseen 3D point uniformly
/// and adding every image observing it, until the subset reaches
/// target_images (or points run out). n_partials independent subsets.
std::vector<std::vector<int>> sample_partial_random_points(
    const Reconstruction& recon, int target_images, int n_partials,
    std::uint64_t seed);

struct PartialReconstruction {
  const Reconstruction* parent = nullptr;
  std::vector<int> image_ids;
  std::vector<std::int64_t> point_ids;
  OrientedCloud cloud;  // normals estimated and oriented from subset images
  std::string origin;   // "trajectory" or "random_points"
};

struct BuildPartialParams {
  int min_track = 2;
  int normals_k = 33;  // clamped to the surviving point count
  std::uint64_t orient_seed = 0;
};

/// Restricts tracks to the image subset, keeps points with at least
/// min_track surviving observations, and builds the oriented cloud.
/// Throws EmptyPartial when no point survives.
PartialReconstruction build_partial(const Reconstruction& recon,
                                    const std::vector<int>& image_ids,
                                    const BuildPartialParams& params = {});

/// Overlap as the geometric mean of the two directional IoUs: the
/// fraction of P with a neighbor in Q within tau after mapping P by T,
/// and symmetrically for Q mapped by T^-1. Distances are measured in the
/// target cloud's frame with inclusive (<= tau) counting.
double compute_overlap(const OrientedCloud& p, const OrientedCloud& q,
                       const SimilarityTransform& T, double tau = 0.1);

enum class RotationProtocol {
  /// Three Euler angles drawn uniformly from [0, 2*pi).
  kEulerUniform,
};

struct ManifestParams {
  double min_overlap = 0.30;  // strict >
  double overlap_tau = 0.1;
  TransformMode mode = TransformMode::kSE3;
  double scale_min = 0.5;  // log-uniform scale range, Sim3 only
  double scale_max = 2.0;
  RotationProtocol rotation_protocol = RotationProtocol::kEulerUniform;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct PairEntry {
  int a = 0;  // indices into the partial list
  int b = 0;
  double overlap = 0.0;
  /// Exact perturbation applied to partial b; maps partial a's frame
  /// (the shared parent frame) into the perturbed b frame.
  SimilarityTransform gt;
  TransformMode mode = TransformMode::kSE3;
  std::string origin;  // "trajectory", "random_points" or "mixed"
};

struct PairManifest {
  std::vector<PairEntry> entries;
};

/// All unordered partial pairs whose overlap (identity alignment, shared
/// parent frame) exceeds min_overlap, each with a seeded random
/// perturbation: Euler rotation, a translation inside the unit box scaled
/// to the target cloud's spread, and (Sim3) a log-uniform scale. The
/// perturbation seed derives from (seed, a, b), so entries are independent
/// of evaluation order. Throws TooFewPartials.
PairManifest build_pair_manifest(
    const std::vector<PartialReconstruction>& partials,
    const ManifestParams& params);

/// The perturbed second cloud of an entry; regenerated on demand,
/// identical to what gen-dataset writes next to the manifest.
OrientedCloud perturbed_cloud(const PartialReconstruction& partial_b,
                              const PairEntry& entry);

}  // namespace sfmreg
