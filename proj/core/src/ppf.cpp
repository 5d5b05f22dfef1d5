#include <Eigen/Geometry>
#include <cmath>

#include "sfmreg/features.hpp"

namespace sfmreg {

double vector_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Ppf make_ppf(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2,
             const Eigen::Vector3d& n1, const Eigen::Vector3d& n2) {
  Ppf out;
  const Eigen::Vector3d d = p2 - p1;
  out.dist = d.norm();
  out.angle_n1_n2 = vector_angle(n1, n2);
  if (out.dist == 0.0) {
    out.coincident = true;
    out.angle_n1_d = out.angle_n1_n2;
    out.angle_n2_d = out.angle_n1_n2;
    return out;
  }
  out.angle_n1_d = vector_angle(n1, d);
  out.angle_n2_d = vector_angle(n2, d);
  return out;
}

}  // namespace sfmreg
