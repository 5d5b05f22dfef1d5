#include <Eigen/Dense>
#include <Eigen/SVD>

#include "sfmreg/geometry.hpp"

namespace sfmreg {

SimilarityTransform fit_umeyama(std::span<const Eigen::Vector3d> src,
                                std::span<const Eigen::Vector3d> dst,
                                std::span<const double> weights,
                                bool with_scale) {
  const std::size_t n = src.size();
  if (n < 3 || dst.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "need at least 3 paired points (got " + std::to_string(n) +
                    " src, " + std::to_string(dst.size()) + " dst)");
  }
  if (!weights.empty() && weights.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "weights size mismatch");
  }

  double weight_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (w < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "negative weight");
    }
    weight_sum += w;
  }
  if (weight_sum <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "all weights are zero");
  }

  Eigen::Vector3d mu_src = Eigen::Vector3d::Zero();
  Eigen::Vector3d mu_dst = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    mu_src += w * src[i];
    mu_dst += w * dst[i];
  }
  mu_src /= weight_sum;
  mu_dst /= weight_sum;

  // Weighted cross-covariance and source variance.
  Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
  double var_src = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    const Eigen::Vector3d ds = src[i] - mu_src;
    const Eigen::Vector3d dd = dst[i] - mu_dst;
    sigma += w * dd * ds.transpose();
    var_src += w * ds.squaredNorm();
  }
  sigma /= weight_sum;
  var_src /= weight_sum;

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      sigma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d d = svd.singularValues();

  // Rank of the weighted centered source: a collinear source collapses the
  // cross-covariance to rank <= 1 and leaves the rotation unconstrained.
  if (!(d(1) > 1e-12 * std::max(d(0), 1e-300)) || var_src <= 0.0) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "source points are collinear or coincident");
  }

  Eigen::Vector3d s_diag = Eigen::Vector3d::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) {
    s_diag(2) = -1.0;
  }

  SimilarityTransform out;
  out.rotation = svd.matrixU() * s_diag.asDiagonal() * svd.matrixV().transpose();
  out.scale = with_scale ? d.dot(s_diag) / var_src : 1.0;
  if (!(out.scale > 0.0)) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "non-positive scale estimate");
  }
  out.translation = mu_dst - out.scale * (out.rotation * mu_src);
  return out;
}

}  // namespace sfmreg
