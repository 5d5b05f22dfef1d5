#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "sfmreg/io.hpp"

namespace sfmreg {

void export_cloud_ply(const OrientedCloud& cloud,
                      const std::filesystem::path& path) {
  if (cloud.points.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "refusing to write empty PLY");
  }
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());

  std::fprintf(f, "ply\nformat ascii 1.0\nelement vertex %zu\n",
               cloud.points.size());
  std::fprintf(f, "property double x\nproperty double y\nproperty double z\n");
  if (cloud.has_normals()) {
    std::fprintf(f,
                 "property double nx\nproperty double ny\nproperty double nz\n");
  }
  std::fprintf(f, "end_header\n");
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i];
    std::fprintf(f, "%.17g %.17g %.17g", p.x(), p.y(), p.z());
    if (cloud.has_normals()) {
      const auto& n = cloud.normals[i];
      std::fprintf(f, " %.17g %.17g %.17g", n.x(), n.y(), n.z());
    }
    std::fputc('\n', f);
  }
  if (std::fclose(f) != 0) {
    throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
  }
}

OrientedCloud import_cloud_ply(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line) || line.substr(0, 3) != "ply") {
    throw Error(ErrorCode::kMalformedLine, path.string() + ": not a PLY file");
  }
  std::size_t vertex_count = 0;
  std::vector<std::string> properties;
  bool ascii = false;
  bool in_vertex_element = false;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string keyword;
    row >> keyword;
    if (keyword == "format") {
      std::string fmt;
      row >> fmt;
      ascii = fmt == "ascii";
    } else if (keyword == "comment") {
      continue;
    } else if (keyword == "element") {
      std::string name;
      std::size_t count = 0;
      row >> name >> count;
      in_vertex_element = name == "vertex";
      if (in_vertex_element) vertex_count = count;
    } else if (keyword == "property" && in_vertex_element) {
      std::string type, name;
      row >> type >> name;
      properties.push_back(name);
    } else if (keyword == "end_header") {
      break;
    }
  }
  if (!ascii) {
    throw Error(ErrorCode::kMalformedLine,
                path.string() + ": only ASCII PLY is supported");
  }
  auto index_of = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < properties.size(); ++i) {
      if (properties[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  const int ix = index_of("x"), iy = index_of("y"), iz = index_of("z");
  const int inx = index_of("nx"), iny = index_of("ny"), inz = index_of("nz");
  if (ix < 0 || iy < 0 || iz < 0) {
    throw Error(ErrorCode::kMalformedLine,
                path.string() + ": vertex element lacks x/y/z");
  }
  const bool with_normals = inx >= 0 && iny >= 0 && inz >= 0;

  OrientedCloud cloud;
  cloud.points.resize(vertex_count);
  if (with_normals) cloud.normals.resize(vertex_count);
  std::vector<double> fields(properties.size());
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::kMalformedLine,
                  path.string() + ": truncated vertex data");
    }
    std::istringstream row(line);
    for (auto& value : fields) {
      if (!(row >> value)) {
        throw Error(ErrorCode::kMalformedLine,
                    path.string() + ": short vertex row " + std::to_string(v));
      }
    }
    cloud.points[v] = {fields[ix], fields[iy], fields[iz]};
    if (with_normals) cloud.normals[v] = {fields[inx], fields[iny], fields[inz]};
  }
  validate_cloud(cloud);
  return cloud;
}

}  // namespace sfmreg
