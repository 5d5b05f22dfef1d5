#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sfmreg/reconstruction.hpp"

namespace sfmreg {

namespace {

// Parameter counts of the COLMAP camera models.
const std::unordered_map<std::string, std::size_t>& camera_model_arity() {
  static const std::unordered_map<std::string, std::size_t> table = {
      {"SIMPLE_PINHOLE", 3}, {"PINHOLE", 4},
      {"SIMPLE_RADIAL", 4},  {"SIMPLE_RADIAL_FISHEYE", 4},
      {"RADIAL", 5},         {"RADIAL_FISHEYE", 5},
      {"OPENCV", 8},         {"OPENCV_FISHEYE", 8},
      {"FULL_OPENCV", 12},   {"FOV", 5},
      {"THIN_PRISM_FISHEYE", 12},
  };
  return table;
}

[[noreturn]] void malformed(const std::string& file, int line_no,
                            const std::string& what) {
  throw Error(ErrorCode::kMalformedLine,
              file + " line " + std::to_string(line_no) + ": " + what);
}

[[noreturn]] void dangling(const std::string& kind, std::int64_t id) {
  throw Error(ErrorCode::kDanglingReference,
              kind + " references missing id " + std::to_string(id));
}

std::ifstream open_or_throw(const std::filesystem::path& dir,
                            const std::string& name) {
  const auto path = dir / name;
  if (!std::filesystem::exists(path)) {
    std::string msg = "missing " + path.string();
    const auto bin = std::filesystem::path(path).replace_extension(".bin");
    if (std::filesystem::exists(bin)) {
      msg += " (found " + bin.filename().string() +
             "; the COLMAP binary format is not supported, export the "
             "reconstruction as text)";
    }
    throw Error(ErrorCode::kMissingFile, msg);
  }
  std::ifstream stream(path);
  if (!stream) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  return stream;
}

bool is_skippable(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;  // blank
}

void parse_cameras(std::ifstream& in, const std::string& fname,
                   Reconstruction& recon) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    std::istringstream row(line);
    CameraModel cam;
    if (!(row >> cam.id >> cam.model_name >> cam.width >> cam.height)) {
      malformed(fname, line_no, "expected 'ID MODEL W H PARAMS...'");
    }
    double value;
    while (row >> value) cam.params.push_back(value);
    if (!row.eof()) malformed(fname, line_no, "trailing garbage");
    if (cam.width <= 0 || cam.height <= 0) {
      malformed(fname, line_no, "non-positive image dimensions");
    }
    const auto arity = camera_model_arity().find(cam.model_name);
    if (arity == camera_model_arity().end()) {
      malformed(fname, line_no, "unknown camera model '" + cam.model_name + "'");
    }
    if (cam.params.size() != arity->second) {
      malformed(fname, line_no,
                cam.model_name + " expects " + std::to_string(arity->second) +
                    " params, got " + std::to_string(cam.params.size()));
    }
    if (!recon.cameras.emplace(cam.id, std::move(cam)).second) {
      malformed(fname, line_no, "duplicate camera id");
    }
  }
}

void parse_images(std::ifstream& in, const std::string& fname,
                  Reconstruction& recon) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;

    std::istringstream row(line);
    PosedImage image;
    double qw, qx, qy, qz;
    if (!(row >> image.id >> qw >> qx >> qy >> qz >> image.translation.x() >>
          image.translation.y() >> image.translation.z() >> image.camera_id)) {
      malformed(fname, line_no,
                "expected 'ID QW QX QY QZ TX TY TZ CAM_ID NAME'");
    }
    std::getline(row, image.name);
    // Trim surrounding whitespace from the name remainder.
    const auto first = image.name.find_first_not_of(" \t\r");
    image.name = first == std::string::npos ? "" : image.name.substr(first);
    while (!image.name.empty() &&
           std::isspace(static_cast<unsigned char>(image.name.back()))) {
      image.name.pop_back();
    }
    if (image.name.empty()) malformed(fname, line_no, "missing image name");

    const double norm = std::sqrt(qw * qw + qx * qx + qy * qy + qz * qz);
    if (!(std::abs(norm - 1.0) < 1e-6)) {
      malformed(fname, line_no, "quaternion norm deviates from 1 by more "
                                "than 1e-6");
    }
    image.rotation = Eigen::Quaterniond(qw / norm, qx / norm, qy / norm,
                                        qz / norm);

    // Observation row: triples of X Y POINT3D_ID; may be empty.
    if (!std::getline(in, line)) {
      malformed(fname, line_no, "missing observation row for image " +
                                    std::to_string(image.id));
    }
    ++line_no;
    std::istringstream obs(line);
    double x, y;
    std::int64_t point_id;
    std::set<std::int64_t> seen;
    std::size_t fields = 0;
    while (obs >> x) {
      if (!(obs >> y >> point_id)) {
        malformed(fname, line_no, "observation row is not X Y ID triples");
      }
      fields += 3;
      if (point_id >= 0) seen.insert(point_id);
    }
    if (!obs.eof()) malformed(fname, line_no, "observation row has non-numeric "
                                              "fields");
    (void)fields;
    image.observed_points.assign(seen.begin(), seen.end());
    if (!recon.images.emplace(image.id, std::move(image)).second) {
      malformed(fname, line_no, "duplicate image id");
    }
  }
}

void parse_points(std::ifstream& in, const std::string& fname,
                  Reconstruction& recon) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    std::istringstream row(line);
    TrackPoint point;
    double error;
    int r, g, b;
    if (!(row >> point.id >> point.position.x() >> point.position.y() >>
          point.position.z() >> r >> g >> b >> error)) {
      malformed(fname, line_no,
                "expected 'ID X Y Z R G B ERROR (IMAGE_ID POINT2D_IDX)...'");
    }
    point.color = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                   static_cast<std::uint8_t>(b)};
    TrackObservation ob;
    while (row >> ob.image_id) {
      if (!(row >> ob.keypoint_index)) {
        malformed(fname, line_no, "odd number of track fields");
      }
      point.track.push_back(ob);
    }
    if (!row.eof()) malformed(fname, line_no, "track has non-numeric fields");
    if (!recon.points.emplace(point.id, std::move(point)).second) {
      malformed(fname, line_no, "duplicate point id");
    }
  }
}

}  // namespace

void check_integrity(const Reconstruction& recon) {
  for (const auto& [image_id, image] : recon.images) {
    if (!recon.cameras.count(image.camera_id)) {
      dangling("image->camera", image.camera_id);
    }
    for (const std::int64_t pid : image.observed_points) {
      const auto it = recon.points.find(pid);
      if (it == recon.points.end()) dangling("image->point", pid);
      const auto& track = it->second.track;
      const bool found = std::any_of(
          track.begin(), track.end(),
          [&](const TrackObservation& ob) { return ob.image_id == image_id; });
      if (!found) {
        throw Error(ErrorCode::kDanglingReference,
                    "image " + std::to_string(image_id) + " observes point " +
                        std::to_string(pid) + " but the track disagrees");
      }
    }
  }
  for (const auto& [point_id, point] : recon.points) {
    for (const auto& ob : point.track) {
      const auto it = recon.images.find(ob.image_id);
      if (it == recon.images.end()) dangling("point->image", ob.image_id);
      if (!std::binary_search(it->second.observed_points.begin(),
                              it->second.observed_points.end(), point_id)) {
        throw Error(ErrorCode::kDanglingReference,
                    "point " + std::to_string(point_id) + " tracks image " +
                        std::to_string(ob.image_id) +
                        " but the image does not observe it");
      }
    }
  }
}

Reconstruction parse_colmap_text(const std::filesystem::path& dir) {
  Reconstruction recon;
  {
    auto in = open_or_throw(dir, "cameras.txt");
    parse_cameras(in, "cameras.txt", recon);
  }
  {
    auto in = open_or_throw(dir, "images.txt");
    parse_images(in, "images.txt", recon);
  }
  {
    auto in = open_or_throw(dir, "points3D.txt");
    parse_points(in, "points3D.txt", recon);
  }

  // Tracks must reference existing images before any filtering.
  for (const auto& [point_id, point] : recon.points) {
    (void)point_id;
    for (const auto& ob : point.track) {
      if (!recon.images.count(ob.image_id)) {
        dangling("point->image", ob.image_id);
      }
    }
  }

  // Drop degenerate tracks (< 2 observations); real exports contain them.
  std::vector<std::int64_t> short_tracks;
  for (const auto& [point_id, point] : recon.points) {
    if (point.track.size() < 2) short_tracks.push_back(point_id);
  }
  for (const std::int64_t pid : short_tracks) recon.points.erase(pid);
  recon.dropped_short_tracks = short_tracks.size();

  // Rebuild image incidence from the surviving tracks. Observations of
  // dropped points disappear with them; observations of never-present
  // points are integrity errors.
  std::unordered_set<std::int64_t> dropped(short_tracks.begin(),
                                           short_tracks.end());
  std::unordered_map<int, std::set<std::int64_t>> incidence;
  for (const auto& [point_id, point] : recon.points) {
    for (const auto& ob : point.track) incidence[ob.image_id].insert(point_id);
  }
  for (auto& [image_id, image] : recon.images) {
    for (const std::int64_t pid : image.observed_points) {
      if (!recon.points.count(pid) && !dropped.count(pid)) {
        dangling("image->point", pid);
      }
    }
    const auto it = incidence.find(image_id);
    if (it == incidence.end()) {
      image.observed_points.clear();  // zero-observation images are retained
    } else {
      image.observed_points.assign(it->second.begin(), it->second.end());
    }
  }

  check_integrity(recon);
  return recon;
}

OrientedCloud extract_cloud(const Reconstruction& recon) {
  if (recon.points.empty()) {
    throw Error(ErrorCode::kEmptyReconstruction, "reconstruction has no points");
  }
  OrientedCloud cloud;
  cloud.points.reserve(recon.points.size());
  cloud.source_point_ids.reserve(recon.points.size());
  for (const auto& [point_id, point] : recon.points) {  // std::map: id order
    cloud.points.push_back(point.position);
    cloud.source_point_ids.push_back(point_id);
  }
  return cloud;
}

Reconstruction restrict_to_images(const Reconstruction& recon,
                                  const std::vector<int>& image_ids,
                                  int min_track) {
  Reconstruction out;
  std::unordered_set<int> keep(image_ids.begin(), image_ids.end());
  for (const int id : image_ids) {
    const auto it = recon.images.find(id);
    if (it == recon.images.end()) dangling("subset->image", id);
    PosedImage image = it->second;
    image.observed_points.clear();  // rebuilt below
    out.images.emplace(id, std::move(image));
  }
  for (const auto& [point_id, point] : recon.points) {
    TrackPoint cut = point;
    std::erase_if(cut.track, [&](const TrackObservation& ob) {
      return !keep.count(ob.image_id);
    });
    if (cut.track.size() < static_cast<std::size_t>(min_track)) {
      ++out.dropped_short_tracks;
      continue;
    }
    out.points.emplace(point_id, std::move(cut));
  }
  std::unordered_map<int, std::set<std::int64_t>> incidence;
  for (const auto& [point_id, point] : out.points) {
    for (const auto& ob : point.track) incidence[ob.image_id].insert(point_id);
  }
  for (auto& [image_id, image] : out.images) {
    const auto it = incidence.find(image_id);
    if (it != incidence.end()) {
      image.observed_points.assign(it->second.begin(), it->second.end());
    }
    const auto cam = recon.cameras.find(image.camera_id);
    if (cam != recon.cameras.end()) out.cameras.emplace(cam->first, cam->second);
  }
  return out;
}

}  // namespace sfmreg
