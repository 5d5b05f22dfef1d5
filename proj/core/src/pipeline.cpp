#include <optional>

#include "sfmreg/geometry.hpp"
#include "sfmreg/kdtree.hpp"
#include "sfmreg/normals.hpp"
#include "sfmreg/parallel.hpp"
#include "sfmreg/pipeline.hpp"
#include "sfmreg/rng.hpp"

namespace sfmreg {

namespace {

OrientedCloud ensure_normals(const OrientedCloud& cloud, int k, int jobs) {
  if (cloud.has_normals()) return cloud;
  const int k_eff = std::min<int>(k, static_cast<int>(cloud.size()));
  if (k_eff < 3) {
    throw Error(ErrorCode::kTooFewPoints,
                "cannot estimate normals on " + std::to_string(cloud.size()) +
                    " points");
  }
  return estimate_normals(cloud, k_eff, jobs);
}

Eigen::MatrixXd gather_rows(const DescriptorTable& table,
                            const std::vector<int>& rows) {
  Eigen::MatrixXd out(rows.size(), table.dim());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(r) = table.vectors.row(rows[r]);
  }
  return out;
}

}  // namespace

PipelineResult register_clouds(const OrientedCloud& cloud_a,
                               const OrientedCloud& cloud_b,
                               const PipelineParams& params) {
  validate_cloud(cloud_a);
  validate_cloud(cloud_b);

  OrientedCloud a = ensure_normals(cloud_a, params.normals_k, params.jobs);
  OrientedCloud b = ensure_normals(cloud_b, params.normals_k, params.jobs);

  NormalizedPair normalized = normalize_pair(a, b, params.mode);
  const OrientedCloud& an = normalized.p;
  const OrientedCloud& bn = normalized.q;

  const KdTree index_a(an.points);
  const KdTree index_b(bn.points);

  const int n_prime_a =
      std::min<int>(params.superpoints, static_cast<int>(an.size()));
  const int n_prime_b =
      std::min<int>(params.superpoints, static_cast<int>(bn.size()));
  SuperpointSet sp_a =
      sample_superpoints(an, n_prime_a, derive_seed(params.seed, 1));
  SuperpointSet sp_b =
      sample_superpoints(bn, n_prime_b, derive_seed(params.seed, 2));
  sp_a.radius = params.descriptor.radius;
  sp_b.radius = params.descriptor.radius;

  const DescriptorTable desc_a =
      params.import_features_a
          ? import_features(*params.import_features_a, sp_a)
          : ppf_histogram_descriptors(an, sp_a, params.descriptor, &index_a,
                                      params.jobs);
  const DescriptorTable desc_b =
      params.import_features_b
          ? import_features(*params.import_features_b, sp_b)
          : ppf_histogram_descriptors(bn, sp_b, params.descriptor, &index_b,
                                      params.jobs);

  const CoarseCorrespondences coarse = coarse_match(desc_a, desc_b,
                                                    params.coarse);
  const LocalGroupPair groups =
      extract_local_groups(an, bn, sp_a, sp_b, coarse, params.group_size,
                           &index_a, &index_b);

  // Fine per-point descriptors feed the transport cost inside each group.
  const PpfDescriptorParams fine_params = params.fine_descriptor();
  const DescriptorTable fine_a =
      ppf_point_descriptors(an, fine_params, &index_a, params.jobs);
  const DescriptorTable fine_b =
      ppf_point_descriptors(bn, fine_params, &index_b, params.jobs);

  std::vector<TransportPlan> plans(groups.size());
  parallel_for(groups.size(), params.jobs, [&](std::size_t r) {
    const Eigen::MatrixXd fa = gather_rows(fine_a, groups.src_indices[r]);
    const Eigen::MatrixXd fb = gather_rows(fine_b, groups.dst_indices[r]);
    const Eigen::MatrixXd cost =
        Eigen::MatrixXd::Constant(fa.rows(), fb.rows(), 1.0) -
        fa * fb.transpose();
    plans[r] = sinkhorn(cost, groups.src_padding[r], groups.dst_padding[r],
                        params.sinkhorn_params);
  });

  PipelineResult result;
  result.matches = extract_matches(groups, plans, params.confidence_min);
  if (result.matches.size() < 3) {
    throw Error(ErrorCode::kNoModelFound,
                "only " + std::to_string(result.matches.size()) +
                    " matches survived transport extraction");
  }

  RansacParams ransac = params.ransac;
  ransac.mode = params.mode;
  ransac.seed = derive_seed(params.seed, 3);
  result.registration = ransac_register(an, bn, result.matches, ransac);

  result.transform_normalized = result.registration.transform;
  result.info_a = normalized.info_p;
  result.info_b = normalized.info_q;
  result.transform_scene = conjugate_from_normalized(
      result.transform_normalized, result.info_a, result.info_b);
  result.superpoint_count_a = n_prime_a;
  result.superpoint_count_b = n_prime_b;
  result.coarse_pair_count = static_cast<int>(coarse.size());
  return result;
}

}  // namespace sfmreg
