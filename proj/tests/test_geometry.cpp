#include <doctest.h>

#include <cmath>

#include "sfmreg/geometry.hpp"
#include "testutil.hpp"

using namespace sfmreg;
using namespace testutil;

TEST_CASE("identity transform leaves a cloud untouched") {
  Rng rng(1);
  auto cloud = random_cloud(rng, 50);
  attach_random_normals(cloud, rng);
  const auto out = apply_transform(SimilarityTransform{}, cloud);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK((out.points[i] - cloud.points[i]).norm() == 0.0);
    CHECK((out.normals[i] - cloud.normals[i]).norm() == 0.0);
  }
}

TEST_CASE("transform then inverse recovers the input") {
  Rng rng(2);
  auto cloud = random_cloud(rng, 80);
  attach_random_normals(cloud, rng);
  const auto T = random_transform(rng, true, 2.0);
  const auto back = apply_transform(invert(T), apply_transform(T, cloud));
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK((back.points[i] - cloud.points[i]).norm() <
          1e-9 * (1.0 + cloud.points[i].norm()));
  }
}

TEST_CASE("pairwise distances scale exactly by s") {
  Rng rng(3);
  const auto cloud = random_cloud(rng, 100);
  const auto T = random_transform(rng, true);
  const auto out = apply_transform(T, cloud);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      const double before = (cloud.points[i] - cloud.points[j]).norm();
      const double after = (out.points[i] - out.points[j]).norm();
      CHECK(after == doctest::Approx(T.scale * before).epsilon(1e-12));
    }
  }
}

TEST_CASE("apply preserves normal unit length") {
  Rng rng(17);
  auto cloud = random_cloud(rng, 60);
  attach_random_normals(cloud, rng);
  const auto out = apply_transform(random_transform(rng, true, 3.0), cloud);
  for (const auto& n : out.normals) {
    CHECK(std::abs(n.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("compose with identity and double inversion") {
  Rng rng(4);
  const auto T = random_transform(rng, true);
  const SimilarityTransform I;

  const auto left = compose(I, T);
  CHECK((left.rotation - T.rotation).cwiseAbs().maxCoeff() == 0.0);
  CHECK(left.scale == T.scale);

  const auto twice = invert(invert(T));
  CHECK((twice.rotation - T.rotation).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(twice.scale == doctest::Approx(T.scale).epsilon(1e-12));
  CHECK((twice.translation - T.translation).norm() < 1e-12);
}

TEST_CASE("compose is associative") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto A = random_transform(rng, true);
    const auto B = random_transform(rng, true);
    const auto C = random_transform(rng, true);
    const auto left = compose(compose(A, B), C);
    const auto right = compose(A, compose(B, C));
    CHECK((left.rotation - right.rotation).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((left.translation - right.translation).norm() < 1e-9);
    CHECK(left.scale == doctest::Approx(right.scale).epsilon(1e-9));
  }
}

TEST_CASE("compose applies the second argument first") {
  Rng rng(6);
  const auto A = random_transform(rng, true);
  const auto B = random_transform(rng, true);
  const Eigen::Vector3d x{0.3, -0.7, 1.1};
  CHECK((compose(A, B)(x) - A(B(x))).norm() < 1e-12);
}

TEST_CASE("umeyama on src == dst gives the identity") {
  std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  const auto T = fit_umeyama(pts, pts);
  CHECK(T.scale == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((T.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(T.translation.norm() < 1e-12);
}

TEST_CASE("umeyama recovers a synthetic transform exactly") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 3 + static_cast<int>(rng.below(48));
    auto src = random_cloud(rng, k);
    const auto T = random_transform(rng, true);
    std::vector<Eigen::Vector3d> dst(k);
    for (int i = 0; i < k; ++i) dst[i] = T(src.points[i]);

    SimilarityTransform est;
    try {
      est = fit_umeyama(src.points, dst, {}, true);
    } catch (const Error&) {
      continue;  // rare near-collinear random triple
    }
    CHECK(rotation_angle_between(est.rotation, T.rotation) < 1e-9);
    CHECK(std::abs(est.scale - T.scale) / T.scale < 1e-12);
    CHECK((est.translation - T.translation).norm() < 1e-9);
  }
}

TEST_CASE("umeyama with_scale=false pins scale to one") {
  Rng rng(8);
  auto src = random_cloud(rng, 20);
  auto T = random_transform(rng, false);
  std::vector<Eigen::Vector3d> dst(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = T(src.points[i]);
  const auto est = fit_umeyama(src.points, dst, {}, false);
  CHECK(est.scale == 1.0);
  CHECK(rotation_angle_between(est.rotation, T.rotation) < 1e-9);
}

TEST_CASE("umeyama weights favor the weighted points") {
  // Two exact correspondence groups under different transforms; full
  // weight on the first group must reproduce its transform.
  Rng rng(9);
  auto src = random_cloud(rng, 12);
  const auto TA = random_transform(rng, true);
  const auto TB = random_transform(rng, true);
  std::vector<Eigen::Vector3d> dst(12);
  std::vector<double> weights(12, 0.0);
  for (int i = 0; i < 12; ++i) {
    dst[i] = i < 6 ? TA(src.points[i]) : TB(src.points[i]);
    weights[i] = i < 6 ? 1.0 : 0.0;
  }
  const auto est = fit_umeyama(src.points, dst, weights, true);
  CHECK(rotation_angle_between(est.rotation, TA.rotation) < 1e-9);
  CHECK(std::abs(est.scale - TA.scale) / TA.scale < 1e-9);
}

TEST_CASE("collinear points are rejected") {
  std::vector<Eigen::Vector3d> src = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  std::vector<Eigen::Vector3d> dst = {{0, 0, 0}, {0, 1, 0}, {0, 2, 0}};
  CHECK_THROWS_WITH_AS(fit_umeyama(src, dst),
                       doctest::Contains("DegenerateConfiguration"), Error);
}

TEST_CASE("normalization: unit cube reaches spectral norm sqrt(2)") {
  OrientedCloud cube;
  for (int x = 0; x <= 1; ++x) {
    for (int y = 0; y <= 1; ++y) {
      for (int z = 0; z <= 1; ++z) cube.points.push_back({double(x), double(y), double(z)});
    }
  }
  const auto norm = normalize_pair(cube, cube, TransformMode::kSim3);
  CHECK(std::abs(centered_spectral_norm(norm.p) - std::sqrt(2.0)) < 1e-9);
}

TEST_CASE("normalization removes scale in Sim3 mode") {
  Rng rng(10);
  auto p = random_cloud(rng, 64);
  OrientedCloud q;
  for (const auto& pt : p.points) q.points.push_back(10.0 * pt);
  const auto norm = normalize_pair(p, q, TransformMode::kSim3);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK((norm.p.points[i] - norm.q.points[i]).norm() < 1e-9);
  }
}

TEST_CASE("normalization keeps the scale ratio in SE3 mode") {
  Rng rng(11);
  auto p = random_cloud(rng, 64);
  OrientedCloud q;
  for (const auto& pt : p.points) q.points.push_back(10.0 * pt);
  const auto norm = normalize_pair(p, q, TransformMode::kSE3);
  CHECK(norm.info_p.divisor == norm.info_q.divisor);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double expect = (10.0 * norm.p.points[i] - norm.q.points[i]).norm();
    CHECK(expect < 1e-12 * (1.0 + norm.q.points[i].norm()));
  }
}

TEST_CASE("normalization is idempotent in Sim3 mode") {
  Rng rng(12);
  const auto p = random_cloud(rng, 40);
  const auto q = random_cloud(rng, 40);
  const auto once = normalize_pair(p, q, TransformMode::kSim3);
  const auto twice = normalize_pair(once.p, once.q, TransformMode::kSim3);
  CHECK(std::abs(twice.info_p.divisor - 1.0) < 1e-9);
  CHECK(std::abs(twice.info_q.divisor - 1.0) < 1e-9);
}

TEST_CASE("degenerate cloud is rejected") {
  OrientedCloud p;
  p.points = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  OrientedCloud q = p;
  CHECK_THROWS_WITH_AS(normalize_pair(p, q, TransformMode::kSim3),
                       doctest::Contains("DegenerateCloud"), Error);
}

TEST_CASE("normalized-frame conjugation round trips") {
  Rng rng(13);
  const auto p = random_cloud(rng, 30, 4.0);
  const auto q = random_cloud(rng, 25, 2.0);
  const auto norm = normalize_pair(p, q, TransformMode::kSim3);
  const auto T = random_transform(rng, true);
  const auto there = conjugate_to_normalized(T, norm.info_p, norm.info_q);
  const auto back = conjugate_from_normalized(there, norm.info_p, norm.info_q);
  CHECK((back.rotation - T.rotation).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(back.scale == doctest::Approx(T.scale).epsilon(1e-12));
  CHECK((back.translation - T.translation).norm() < 1e-9);

  // The conjugated transform maps normalized p-points the same way T maps
  // raw ones.
  const Eigen::Vector3d x = p.points[0];
  const Eigen::Vector3d xn = (x - norm.info_p.centroid) / norm.info_p.divisor;
  const Eigen::Vector3d mapped = there(xn);
  const Eigen::Vector3d expect =
      (T(x) - norm.info_q.centroid) / norm.info_q.divisor;
  CHECK((mapped - expect).norm() < 1e-9);
}
