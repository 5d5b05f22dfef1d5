#pragma once

#include <Eigen/Core>
#include <filesystem>

#include "sfmreg/types.hpp"

namespace sfmreg {

/// Writes an ASCII PLY with x,y,z properties, plus nx,ny,nz when the cloud
/// carries normals. Coordinates are printed with 17 significant digits so
/// a write/parse round trip reproduces them bit-exactly.
void export_cloud_ply(const OrientedCloud& cloud,
                      const std::filesystem::path& path);

/// Reads an ASCII PLY written by export_cloud_ply (or any ASCII PLY whose
/// vertex element carries x,y,z and optionally nx,ny,nz as leading
/// properties). source_point_ids are left empty.
OrientedCloud import_cloud_ply(const std::filesystem::path& path);

/// Writes correspondences as versioned JSON:
/// {"schema":1,"pairs":[[i,j],...],"scores":[...]}.
void export_matches_json(const CorrespondenceSet& corrs,
                         const std::filesystem::path& path);

CorrespondenceSet import_matches_json(const std::filesystem::path& path);

/// Row-major float32 descriptor file, little-endian:
/// magic u32 = 0x53464D46, version u32 = 1, rows u64, dim u32, then
/// rows*dim floats.
void write_feature_file(const Eigen::MatrixXf& rows,
                        const std::filesystem::path& path);

Eigen::MatrixXf read_feature_file(const std::filesystem::path& path);

}  // namespace sfmreg
