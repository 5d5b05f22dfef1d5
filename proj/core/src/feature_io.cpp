#include <cstdint>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sfmreg/io.hpp"

namespace sfmreg {

namespace {
constexpr std::uint32_t kFeatureMagic = 0x53464D46u;
constexpr std::uint32_t kFeatureVersion = 1u;

template <typename T>
void write_le(std::ofstream& out, T value) {
  // Host is little-endian on every supported target.
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}
}  // namespace

void export_matches_json(const CorrespondenceSet& corrs,
                         const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["schema"] = 1;
  auto& pairs = doc["pairs"] = nlohmann::json::array();
  for (const auto& [i, j] : corrs.pairs) {
    pairs.push_back(nlohmann::json::array({i, j}));
  }
  doc["scores"] = corrs.scores;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  out << doc.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed " + path.string());
}

CorrespondenceSet import_matches_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedLine, path.string() + ": " + e.what());
  }
  if (doc.value("schema", 0) != 1) {
    throw Error(ErrorCode::kMalformedLine,
                path.string() + ": unsupported matches schema");
  }
  CorrespondenceSet corrs;
  for (const auto& pair : doc.at("pairs")) {
    corrs.pairs.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  }
  corrs.scores = doc.at("scores").get<std::vector<double>>();
  if (corrs.scores.size() != corrs.pairs.size()) {
    throw Error(ErrorCode::kMalformedLine,
                path.string() + ": pairs/scores length mismatch");
  }
  return corrs;
}

void write_feature_file(const Eigen::MatrixXf& rows,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  write_le<std::uint32_t>(out, kFeatureMagic);
  write_le<std::uint32_t>(out, kFeatureVersion);
  write_le<std::uint64_t>(out, static_cast<std::uint64_t>(rows.rows()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(rows.cols()));
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      write_le<float>(out, rows(r, c));
    }
  }
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed " + path.string());
}

Eigen::MatrixXf read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  const auto magic = read_le<std::uint32_t>(in);
  const auto version = read_le<std::uint32_t>(in);
  const auto rows = read_le<std::uint64_t>(in);
  const auto dim = read_le<std::uint32_t>(in);
  if (!in || magic != kFeatureMagic) {
    throw Error(ErrorCode::kMalformedLine,
                path.string() + ": bad feature file magic");
  }
  if (version != kFeatureVersion) {
    throw Error(ErrorCode::kMalformedLine,
                path.string() + ": unsupported feature file version " +
                    std::to_string(version));
  }
  if (dim == 0) {
    throw Error(ErrorCode::kDimensionMismatch, path.string() + ": zero dim");
  }
  Eigen::MatrixXf table(static_cast<Eigen::Index>(rows),
                        static_cast<Eigen::Index>(dim));
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
      table(r, c) = read_le<float>(in);
    }
  }
  if (!in) {
    throw Error(ErrorCode::kDimensionMismatch,
                path.string() + ": payload shorter than rows*dim");
  }
  return table;
}

}  // namespace sfmreg
