#include <doctest.h>

#include <cmath>

#include "sfmreg/geometry.hpp"
#include "sfmreg/normals.hpp"
#include "testutil.hpp"

using namespace sfmreg;
using namespace testutil;

namespace {

OrientedCloud plane_cloud(int n, Rng& rng) {
  OrientedCloud cloud;
  cloud.points.resize(n);
  for (auto& p : cloud.points) {
    p = {rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0};
  }
  return cloud;
}

}  // namespace

TEST_CASE("planar cloud gets +-z normals") {
  Rng rng(1);
  const auto cloud = plane_cloud(100, rng);
  const auto with_normals = estimate_normals(cloud, 33);
  for (const auto& n : with_normals.normals) {
    CHECK(std::abs(std::abs(n.z()) - 1.0) < 1e-6);
  }
}

TEST_CASE("sphere normals point radially for nearly all points") {
  Rng rng(2);
  OrientedCloud cloud;
  cloud.points.resize(2000);
  for (auto& p : cloud.points) {
    do {
      p = {rng.normal(), rng.normal(), rng.normal()};
    } while (p.norm() < 1e-3);
    p.normalize();
  }
  const auto with_normals = estimate_normals(cloud, 33);
  int good = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double cosv =
        std::abs(with_normals.normals[i].dot(cloud.points[i].normalized()));
    if (std::acos(std::min(1.0, cosv)) < 5.0 * std::numbers::pi / 180.0) {
      ++good;
    }
  }
  CHECK(good >= static_cast<int>(0.99 * cloud.size()));
}

TEST_CASE("normal estimation is rotation equivariant up to sign") {
  Rng rng(3);
  auto cloud = random_cloud(rng, 300);
  const Eigen::Matrix3d R = random_rotation(rng);
  OrientedCloud rotated;
  rotated.points.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    rotated.points[i] = R * cloud.points[i];
  }
  const auto n1 = estimate_normals(cloud, 20);
  const auto n2 = estimate_normals(rotated, 20);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d expected = R * n1.normals[i];
    const double align = std::abs(expected.dot(n2.normals[i]));
    CHECK(align > 1.0 - 1e-6);
  }
}

TEST_CASE("too few points is rejected") {
  Rng rng(4);
  const auto cloud = random_cloud(rng, 10);
  CHECK_THROWS_WITH_AS(estimate_normals(cloud, 33),
                       doctest::Contains("TooFewPoints"), Error);
}

namespace {

// Plane z=0 observed by two cameras at the same center so every track has
// the two observations the invariants require.
Reconstruction plane_scene(const Eigen::Vector3d& camera_center, int n,
                           Rng& rng, std::vector<Eigen::Vector3d>* pts) {
  std::map<int, PosedImage> images;
  PosedImage a;
  a.id = 1;
  a.name = "a.jpg";
  a.rotation = Eigen::Quaterniond::Identity();
  a.translation = -camera_center;  // R = I so t = -center
  PosedImage b = a;
  b.id = 2;
  b.name = "b.jpg";
  images[1] = a;
  images[2] = b;

  std::vector<Eigen::Vector3d> positions(n);
  for (auto& p : positions) {
    p = {rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0};
  }
  if (pts) *pts = positions;

  Reconstruction recon;
  CameraModel cam;
  cam.id = 1;
  cam.model_name = "SIMPLE_PINHOLE";
  cam.width = 100;
  cam.height = 100;
  cam.params = {50, 50, 50};
  recon.cameras[1] = cam;
  int kp_a = 0, kp_b = 0;
  for (int i = 0; i < n; ++i) {
    TrackPoint point;
    point.id = i + 1;
    point.position = positions[i];
    point.track = {{1, kp_a++}, {2, kp_b++}};
    recon.points[point.id] = point;
  }
  for (auto& [id, image] : images) {
    for (int i = 0; i < n; ++i) image.observed_points.push_back(i + 1);
    recon.images[id] = image;
  }
  return recon;
}

}  // namespace

TEST_CASE("orientation flips normals towards the camera") {
  Rng rng(5);
  const auto recon = plane_scene({0, 0, 5.0}, 100, rng, nullptr);
  auto cloud = extract_cloud(recon);
  cloud = estimate_normals(cloud, 33);
  const auto oriented = orient_normals(recon, cloud, 7);
  for (const auto& n : oriented.normals) {
    CHECK(n.z() == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("camera below the plane flips the other way") {
  Rng rng(6);
  const auto recon = plane_scene({0, 0, -5.0}, 100, rng, nullptr);
  auto cloud = extract_cloud(recon);
  cloud = estimate_normals(cloud, 33);
  const auto oriented = orient_normals(recon, cloud, 7);
  for (const auto& n : oriented.normals) {
    CHECK(n.z() == doctest::Approx(-1.0).epsilon(1e-6));
  }
}

TEST_CASE("orientation is bitwise deterministic under a fixed seed") {
  const auto recon = make_synthetic_reconstruction(8, 120, 21);
  auto cloud = extract_cloud(recon);
  cloud = estimate_normals(cloud, std::min<int>(33, cloud.size()));
  const auto o1 = orient_normals(recon, cloud, 99);
  const auto o2 = orient_normals(recon, cloud, 99);
  for (std::size_t i = 0; i < o1.size(); ++i) {
    CHECK(o1.normals[i] == o2.normals[i]);
  }
}

TEST_CASE("orientation requires a track mapping") {
  Rng rng(7);
  auto cloud = random_cloud(rng, 50);
  attach_random_normals(cloud, rng);
  const Reconstruction empty;
  CHECK_THROWS_WITH_AS(orient_normals(empty, cloud, 0),
                       doctest::Contains("MissingTrack"), Error);
}
