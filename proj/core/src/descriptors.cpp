#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "sfmreg/features.hpp"
#include "sfmreg/io.hpp"
#include "sfmreg/parallel.hpp"

namespace sfmreg {

namespace {

int clamp_bin(double value, double range, int bins) {
  const int bin = static_cast<int>(value / range * bins);
  return std::clamp(bin, 0, bins - 1);
}

// Histogram of the PPFs between `center` and its support neighbors,
// concatenated over the four channels and L2-normalized. Returns true when
// the neighborhood was empty and the uniform fallback was used.
bool histogram_row(const OrientedCloud& cloud, const KdTree& index, int center,
                   const PpfDescriptorParams& params, Eigen::VectorXd& row) {
  std::vector<Neighbor> support;
  if (params.knn_support) {
    const int k = std::min<int>(params.support_k + 1,
                                static_cast<int>(cloud.size()));
    support = index.knn(cloud.points[center], k);
  } else {
    support = index.radius(cloud.points[center], params.radius);
  }

  const int bd = params.distance_bins;
  const int ba = params.angle_bins;
  row.setZero();
  std::size_t used = 0;
  for (const auto& nb : support) {
    if (nb.index == center) continue;
    const Ppf ppf = make_ppf(cloud.points[center], cloud.points[nb.index],
                             cloud.normals[center], cloud.normals[nb.index]);
    row[clamp_bin(ppf.dist, params.radius, bd)] += 1.0;
    row[bd + clamp_bin(ppf.angle_n1_d, std::numbers::pi, ba)] += 1.0;
    row[bd + ba + clamp_bin(ppf.angle_n2_d, std::numbers::pi, ba)] += 1.0;
    row[bd + 2 * ba + clamp_bin(ppf.angle_n1_n2, std::numbers::pi, ba)] += 1.0;
    ++used;
  }
  if (used == 0) {
    row.setConstant(1.0 / std::sqrt(static_cast<double>(params.dim())));
    return true;
  }
  row /= row.norm();
  return false;
}

DescriptorTable descriptors_for_indices(const OrientedCloud& cloud,
                                        const std::vector<int>& centers,
                                        const PpfDescriptorParams& params,
                                        const KdTree* index, int jobs) {
  if (!cloud.has_normals()) {
    throw Error(ErrorCode::kMissingNormals, "PPF descriptors need normals");
  }
  if (params.radius <= 0.0 || params.distance_bins < 1 || params.angle_bins < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad descriptor parameters");
  }

  std::optional<KdTree> local_index;
  if (!index) local_index.emplace(cloud.points);
  const KdTree& tree = index ? *index : *local_index;

  DescriptorTable table;
  table.source = DescriptorSource::kPpfHistogram;
  table.vectors.resize(static_cast<Eigen::Index>(centers.size()), params.dim());
  table.empty_neighborhood.assign(centers.size(), false);
  std::vector<char> empty_flags(centers.size(), 0);
  parallel_for(centers.size(), jobs, [&](std::size_t i) {
    Eigen::VectorXd row(params.dim());
    empty_flags[i] = histogram_row(cloud, tree, centers[i], params, row);
    table.vectors.row(i) = row.transpose();
  });
  for (std::size_t i = 0; i < centers.size(); ++i) {
    table.empty_neighborhood[i] = empty_flags[i] != 0;
  }
  return table;
}

}  // namespace

DescriptorTable ppf_histogram_descriptors(const OrientedCloud& cloud,
                                          const SuperpointSet& superpoints,
                                          const PpfDescriptorParams& params,
                                          const KdTree* index, int jobs) {
  return descriptors_for_indices(cloud, superpoints.indices, params, index,
                                 jobs);
}

DescriptorTable ppf_point_descriptors(const OrientedCloud& cloud,
                                      const PpfDescriptorParams& params,
                                      const KdTree* index, int jobs) {
  std::vector<int> all(cloud.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return descriptors_for_indices(cloud, all, params, index, jobs);
}

DescriptorTable import_features(const std::filesystem::path& path,
                                const SuperpointSet& superpoints) {
  const Eigen::MatrixXf raw = read_feature_file(path);
  if (raw.rows() != static_cast<Eigen::Index>(superpoints.indices.size())) {
    throw Error(ErrorCode::kRowCountMismatch,
                path.string() + ": " + std::to_string(raw.rows()) +
                    " rows for " + std::to_string(superpoints.indices.size()) +
                    " superpoints");
  }
  DescriptorTable table;
  table.source = DescriptorSource::kImported;
  table.vectors = raw.cast<double>();
  table.empty_neighborhood.assign(raw.rows(), false);
  for (Eigen::Index r = 0; r < table.vectors.rows(); ++r) {
    const double norm = table.vectors.row(r).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  path.string() + ": row " + std::to_string(r) +
                      " is zero or non-finite");
    }
    table.vectors.row(r) /= norm;
  }
  return table;
}

}  // namespace sfmreg
