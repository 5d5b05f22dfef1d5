#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sfmreg/types.hpp"

namespace sfmreg {

struct CameraModel {
  int id = -1;
  std::string model_name;
  int width = 0;
  int height = 0;
  std::vector<double> params;
};

/// World-to-camera pose plus the point ids this image observes.
struct PosedImage {
  int id = -1;
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();  // world->cam
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();         // world->cam
  int camera_id = -1;
  std::string name;
  std::vector<std::int64_t> observed_points;  // sorted, unique

  /// Camera center in world coordinates: -R^T * t.
  Eigen::Vector3d center() const {
    return -(rotation.toRotationMatrix().transpose() * translation);
  }
};

struct TrackObservation {
  int image_id = -1;
  int keypoint_index = -1;
};

struct TrackPoint {
  std::int64_t id = -1;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  std::array<std::uint8_t, 3> color = {0, 0, 0};
  std::vector<TrackObservation> track;
};

/// Sparse SfM reconstruction: cameras, posed images, and 3D points with
/// tracks. Immutable after construction; point ids are preserved from the
/// input so ground-truth correspondence across derived partials stays
/// id-based. Ordered maps keep every iteration order deterministic.
struct Reconstruction {
  std::map<int, CameraModel> cameras;
  std::map<int, PosedImage> images;
  std::map<std::int64_t, TrackPoint> points;

  /// Points whose track shrank below 2 observations and were dropped
  /// during parsing or filtering.
  std::size_t dropped_short_tracks = 0;
};

/// Parses a COLMAP sparse *text* reconstruction (cameras.txt, images.txt,
/// points3D.txt). Comment lines and blank lines are skipped; arbitrary
/// whitespace runs are accepted. Points with track length < 2 are dropped
/// (counted in dropped_short_tracks) and their incidences pruned from the
/// images. Images with zero observations are retained. The binary layout
/// (.bin) is rejected with a clear error.
///
/// Throws MissingFile, MalformedLine(file, line) and
/// DanglingReference(kind, id).
Reconstruction parse_colmap_text(const std::filesystem::path& dir);

/// Verifies referential integrity in both directions
/// (image.observed_points <-> point.track). Throws DanglingReference.
void check_integrity(const Reconstruction& recon);

/// Extracts the point cloud: rows in ascending point-id order, normals
/// unset, source_point_ids filled. Duplicate positions are preserved.
/// Throws EmptyReconstruction.
OrientedCloud extract_cloud(const Reconstruction& recon);

/// Restricts the reconstruction to a subset of images: tracks are cut to
/// the subset and points with fewer than min_track surviving observations
/// are dropped. Camera set is restricted to the referenced ones.
Reconstruction restrict_to_images(const Reconstruction& recon,
                                  const std::vector<int>& image_ids,
                                  int min_track = 2);

}  // namespace sfmreg
