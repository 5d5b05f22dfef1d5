#include <Eigen/Geometry>
#include <cmath>
#include <numbers>

#include "sfmreg/dataset.hpp"
#include "sfmreg/geometry.hpp"
#include "sfmreg/parallel.hpp"

namespace sfmreg {

namespace {

// Rz(a) * Ry(b) * Rx(c) from three uniform angles in [0, 2*pi).
Eigen::Matrix3d euler_rotation(double a, double b, double c) {
  return (Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(c, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

SimilarityTransform random_perturbation(Rng& rng, const ManifestParams& params,
                                        double spread) {
  SimilarityTransform T;
  const double two_pi = 2.0 * std::numbers::pi;
  const double a = rng.uniform(0.0, two_pi);
  const double b = rng.uniform(0.0, two_pi);
  const double c = rng.uniform(0.0, two_pi);
  T.rotation = euler_rotation(a, b, c);
  // Unit box in normalized units, scaled back to the cloud's spread.
  for (int axis = 0; axis < 3; ++axis) {
    T.translation[axis] = rng.uniform(-0.5, 0.5) * spread;
  }
  if (params.mode == TransformMode::kSim3) {
    T.scale = std::exp(
        rng.uniform(std::log(params.scale_min), std::log(params.scale_max)));
  }
  return T;
}

std::string pair_origin(const PartialReconstruction& a,
                        const PartialReconstruction& b) {
  if (a.origin == b.origin) return a.origin;
  return "mixed";
}

}  // namespace

PairManifest build_pair_manifest(
    const std::vector<PartialReconstruction>& partials,
    const ManifestParams& params) {
  if (partials.size() < 2) {
    throw Error(ErrorCode::kTooFewPartials,
                "need at least 2 partials, got " +
                    std::to_string(partials.size()));
  }
  if (params.mode == TransformMode::kSim3 &&
      !(params.scale_min > 0.0 && params.scale_max >= params.scale_min)) {
    throw Error(ErrorCode::kInvalidArgument, "bad scale range");
  }

  struct Candidate {
    int a, b;
    double overlap = -1.0;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < static_cast<int>(partials.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(partials.size()); ++j) {
      candidates.push_back({i, j});
    }
  }

  // Partials share the parent frame, so overlap is computed under the
  // identity alignment.
  const SimilarityTransform identity;
  parallel_for(candidates.size(), params.jobs, [&](std::size_t c) {
    candidates[c].overlap =
        compute_overlap(partials[candidates[c].a].cloud,
                        partials[candidates[c].b].cloud, identity,
                        params.overlap_tau);
  });

  PairManifest manifest;
  for (const auto& cand : candidates) {
    if (!(cand.overlap > params.min_overlap)) continue;
    PairEntry entry;
    entry.a = cand.a;
    entry.b = cand.b;
    entry.overlap = cand.overlap;
    entry.mode = params.mode;
    entry.origin = pair_origin(partials[cand.a], partials[cand.b]);
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(cand.a),
                        static_cast<std::uint64_t>(cand.b)));
    entry.gt = random_perturbation(
        rng, params, centered_spectral_norm(partials[cand.b].cloud));
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

}  // namespace sfmreg
