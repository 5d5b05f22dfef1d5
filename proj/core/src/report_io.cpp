#include <fstream>

#include <nlohmann/json.hpp>

#include "sfmreg/serialize.hpp"

namespace sfmreg {

namespace {

using nlohmann::json;

json transform_to_json(const SimilarityTransform& T) {
  std::vector<double> r(9);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r[3 * i + j] = T.rotation(i, j);
  }
  return json{{"s", T.scale},
              {"R", r},
              {"t", {T.translation.x(), T.translation.y(), T.translation.z()}}};
}

SimilarityTransform transform_from_json(const json& j) {
  SimilarityTransform T;
  T.scale = j.at("s").get<double>();
  const auto r = j.at("R").get<std::vector<double>>();
  if (r.size() != 9) {
    throw Error(ErrorCode::kMalformedLine, "transform R must have 9 entries");
  }
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) T.rotation(i, k) = r[3 * i + k];
  }
  const auto t = j.at("t").get<std::vector<double>>();
  if (t.size() != 3) {
    throw Error(ErrorCode::kMalformedLine, "transform t must have 3 entries");
  }
  T.translation = {t[0], t[1], t[2]};
  return T;
}

json normalization_to_json(const NormalizationInfo& info) {
  return json{{"centroid",
               {info.centroid.x(), info.centroid.y(), info.centroid.z()}},
              {"divisor", info.divisor},
              {"mode", transform_mode_name(info.mode)}};
}

NormalizationInfo normalization_from_json(const json& j) {
  NormalizationInfo info;
  const auto c = j.at("centroid").get<std::vector<double>>();
  info.centroid = {c.at(0), c.at(1), c.at(2)};
  info.divisor = j.at("divisor").get<double>();
  info.mode = parse_transform_mode(j.at("mode").get<std::string>());
  return info;
}

// The effective pipeline configuration. `jobs` is deliberately left out:
// it only controls scheduling, and outputs must be byte-identical across
// worker counts.
json pipeline_config_to_json(const PipelineParams& p) {
  json j;
  j["mode"] = transform_mode_name(p.mode);
  j["normals_k"] = p.normals_k;
  j["superpoints"] = p.superpoints;
  j["descriptor"] = {{"radius", p.descriptor.radius},
                     {"distance_bins", p.descriptor.distance_bins},
                     {"angle_bins", p.descriptor.angle_bins},
                     {"knn_support", p.descriptor.knn_support},
                     {"support_k", p.descriptor.support_k}};
  j["coarse"] = {{"k", p.coarse.k},
                 {"mutual_rank", p.coarse.mutual_rank},
                 {"min_score", p.coarse.min_score}};
  j["group_size"] = p.group_size;
  j["sinkhorn"] = {{"iterations", p.sinkhorn_params.iterations},
                   {"temperature", p.sinkhorn_params.temperature},
                   {"slack_score", p.sinkhorn_params.slack_score},
                   {"marginal_tolerance", p.sinkhorn_params.marginal_tolerance}};
  j["confidence_min"] = p.confidence_min;
  j["ransac"] = {{"inlier_threshold", p.ransac.inlier_threshold},
                 {"max_correspondences", p.ransac.max_correspondences},
                 {"max_iterations", p.ransac.max_iterations},
                 {"confidence", p.ransac.confidence}};
  j["seed"] = p.seed;
  j["features"] = p.import_features_a || p.import_features_b
                      ? "imported"
                      : "ppf";
  if (p.import_features_a) j["import_features_a"] = p.import_features_a->string();
  if (p.import_features_b) j["import_features_b"] = p.import_features_b->string();
  return j;
}

PipelineParams pipeline_config_from_json(const json& j) {
  PipelineParams p;
  p.mode = parse_transform_mode(j.at("mode").get<std::string>());
  p.normals_k = j.at("normals_k").get<int>();
  p.superpoints = j.at("superpoints").get<int>();
  const auto& d = j.at("descriptor");
  p.descriptor.radius = d.at("radius").get<double>();
  p.descriptor.distance_bins = d.at("distance_bins").get<int>();
  p.descriptor.angle_bins = d.at("angle_bins").get<int>();
  p.descriptor.knn_support = d.at("knn_support").get<bool>();
  p.descriptor.support_k = d.at("support_k").get<int>();
  const auto& c = j.at("coarse");
  p.coarse.k = c.at("k").get<int>();
  p.coarse.mutual_rank = c.at("mutual_rank").get<int>();
  p.coarse.min_score = c.at("min_score").get<double>();
  p.group_size = j.at("group_size").get<int>();
  const auto& s = j.at("sinkhorn");
  p.sinkhorn_params.iterations = s.at("iterations").get<int>();
  p.sinkhorn_params.temperature = s.at("temperature").get<double>();
  p.sinkhorn_params.slack_score = s.at("slack_score").get<double>();
  p.sinkhorn_params.marginal_tolerance = s.at("marginal_tolerance").get<double>();
  p.confidence_min = j.at("confidence_min").get<double>();
  const auto& r = j.at("ransac");
  p.ransac.inlier_threshold = r.at("inlier_threshold").get<double>();
  p.ransac.max_correspondences = r.at("max_correspondences").get<int>();
  p.ransac.max_iterations = r.at("max_iterations").get<int>();
  p.ransac.confidence = r.at("confidence").get<double>();
  p.ransac.mode = p.mode;
  p.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("import_features_a")) {
    p.import_features_a = j.at("import_features_a").get<std::string>();
  }
  if (j.contains("import_features_b")) {
    p.import_features_b = j.at("import_features_b").get<std::string>();
  }
  return p;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  }
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedLine, path.string() + ": " + e.what());
  }
}

void dump_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed " + path.string());
}

}  // namespace

void write_registration_report(const RegistrationReportFile& report,
                               const std::filesystem::path& path) {
  json j;
  j["schema"] = 1;
  j["config"] = pipeline_config_to_json(report.config);
  j["transform_scene"] = transform_to_json(report.transform_scene);
  j["transform_normalized"] = transform_to_json(report.transform_normalized);
  j["normalization_a"] = normalization_to_json(report.info_a);
  j["normalization_b"] = normalization_to_json(report.info_b);
  j["num_matches"] = report.num_matches;
  j["inlier_count"] = report.inlier_count;
  j["inlier_rms"] = report.inlier_rms;
  j["iterations"] = report.iterations;
  j["superpoints_a"] = report.superpoint_count_a;
  j["superpoints_b"] = report.superpoint_count_b;
  j["coarse_pairs"] = report.coarse_pair_count;
  j["cloud_a"] = report.cloud_a;
  j["cloud_b"] = report.cloud_b;
  j["matches_file"] = report.matches_file;
  if (report.timing_ms) j["timing_ms"] = *report.timing_ms;
  dump_json(j, path);
}

RegistrationReportFile read_registration_report(
    const std::filesystem::path& path) {
  const json j = load_json(path);
  if (j.value("schema", 0) != 1) {
    throw Error(ErrorCode::kMalformedLine,
                path.string() + ": unsupported report schema");
  }
  RegistrationReportFile report;
  report.config = pipeline_config_from_json(j.at("config"));
  report.transform_scene = transform_from_json(j.at("transform_scene"));
  report.transform_normalized =
      transform_from_json(j.at("transform_normalized"));
  report.info_a = normalization_from_json(j.at("normalization_a"));
  report.info_b = normalization_from_json(j.at("normalization_b"));
  report.num_matches = j.at("num_matches").get<int>();
  report.inlier_count = j.at("inlier_count").get<int>();
  report.inlier_rms = j.at("inlier_rms").get<double>();
  report.iterations = j.at("iterations").get<int>();
  report.superpoint_count_a = j.value("superpoints_a", 0);
  report.superpoint_count_b = j.value("superpoints_b", 0);
  report.coarse_pair_count = j.value("coarse_pairs", 0);
  report.cloud_a = j.value("cloud_a", "");
  report.cloud_b = j.value("cloud_b", "");
  report.matches_file = j.value("matches_file", "");
  if (j.contains("timing_ms")) report.timing_ms = j.at("timing_ms").get<double>();
  return report;
}

void write_manifest_json(const ManifestFile& file,
                         const std::filesystem::path& path) {
  json j;
  j["schema"] = 1;
  json config;
  config["seed"] = file.config.manifest.seed;
  config["mode"] = transform_mode_name(file.config.manifest.mode);
  config["min_overlap"] = file.config.manifest.min_overlap;
  config["overlap_tau"] = file.config.manifest.overlap_tau;
  config["scale_min"] = file.config.manifest.scale_min;
  config["scale_max"] = file.config.manifest.scale_max;
  config["rotation_protocol"] = "euler_uniform";
  config["n_low"] = file.config.trajectory.n_low;
  config["n_high"] = file.config.trajectory.n_high;
  config["target_images"] = file.config.target_images;
  config["n_partials"] = file.config.n_partials;
  config["strategy"] = file.config.strategy;
  config["normals_k"] = file.config.normals_k;
  j["config"] = config;
  j["partials"] = file.partial_files;
  j["partial_origins"] = file.partial_origins;
  auto& pairs = j["pairs"] = json::array();
  for (std::size_t e = 0; e < file.manifest.entries.size(); ++e) {
    const PairEntry& entry = file.manifest.entries[e];
    json row;
    row["a"] = entry.a;
    row["b"] = entry.b;
    row["overlap"] = entry.overlap;
    row["gt"] = transform_to_json(entry.gt);
    row["mode"] = transform_mode_name(entry.mode);
    row["origin"] = entry.origin;
    row["cloud_b"] = file.pair_b_files.at(e);
    pairs.push_back(std::move(row));
  }
  dump_json(j, path);
}

ManifestFile read_manifest_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  if (j.value("schema", 0) != 1) {
    throw Error(ErrorCode::kMalformedLine,
                path.string() + ": unsupported manifest schema");
  }
  ManifestFile file;
  const auto& config = j.at("config");
  file.config.manifest.seed = config.at("seed").get<std::uint64_t>();
  file.config.manifest.mode =
      parse_transform_mode(config.at("mode").get<std::string>());
  file.config.manifest.min_overlap = config.at("min_overlap").get<double>();
  file.config.manifest.overlap_tau = config.at("overlap_tau").get<double>();
  file.config.manifest.scale_min = config.at("scale_min").get<double>();
  file.config.manifest.scale_max = config.at("scale_max").get<double>();
  file.config.trajectory.n_low = config.at("n_low").get<int>();
  file.config.trajectory.n_high = config.at("n_high").get<int>();
  file.config.target_images = config.at("target_images").get<int>();
  file.config.n_partials = config.at("n_partials").get<int>();
  file.config.strategy = config.at("strategy").get<std::string>();
  file.config.normals_k = config.at("normals_k").get<int>();
  file.partial_files = j.at("partials").get<std::vector<std::string>>();
  file.partial_origins =
      j.at("partial_origins").get<std::vector<std::string>>();
  for (const auto& row : j.at("pairs")) {
    PairEntry entry;
    entry.a = row.at("a").get<int>();
    entry.b = row.at("b").get<int>();
    entry.overlap = row.at("overlap").get<double>();
    entry.gt = transform_from_json(row.at("gt"));
    entry.mode = parse_transform_mode(row.at("mode").get<std::string>());
    entry.origin = row.value("origin", "");
    file.pair_b_files.push_back(row.at("cloud_b").get<std::string>());
    file.manifest.entries.push_back(std::move(entry));
  }
  return file;
}

void write_benchmark_report(const BenchmarkReportFile& file,
                            const std::filesystem::path& path) {
  json j;
  j["schema"] = 1;
  j["config"] = {{"tau_ir", file.report.thresholds.tau_ir},
                 {"tau_fmr", file.report.thresholds.tau_fmr},
                 {"rr_rot_deg", file.report.thresholds.rr_rot_deg},
                 {"rr_trans", file.report.thresholds.rr_trans},
                 {"manifest", file.manifest_file},
                 {"results_dir", file.results_dir}};
  auto& pairs = j["pairs"] = json::array();
  for (const auto& e : file.report.pairs) {
    pairs.push_back(json{{"a", e.a},
                         {"b", e.b},
                         {"inlier_ratio", e.inlier_ratio},
                         {"num_matches", e.num_matches},
                         {"num_inliers", e.num_inliers},
                         {"empty_matches", e.empty_matches},
                         {"rot_error_rad", e.rot_error_rad},
                         {"trans_error", e.trans_error},
                         {"registered", e.registered}});
  }
  j["aggregates"] = {{"ir_mean", file.report.aggregates.ir_mean},
                     {"ir_pooled", file.report.aggregates.ir_pooled},
                     {"fmr", file.report.aggregates.fmr},
                     {"rr", file.report.aggregates.rr},
                     {"matches_mean", file.report.aggregates.matches_mean}};
  dump_json(j, path);
}

BenchmarkReportFile read_benchmark_report(const std::filesystem::path& path) {
  const json j = load_json(path);
  if (j.value("schema", 0) != 1) {
    throw Error(ErrorCode::kMalformedLine,
                path.string() + ": unsupported report schema");
  }
  BenchmarkReportFile file;
  const auto& config = j.at("config");
  file.report.thresholds.tau_ir = config.at("tau_ir").get<double>();
  file.report.thresholds.tau_fmr = config.at("tau_fmr").get<double>();
  file.report.thresholds.rr_rot_deg = config.at("rr_rot_deg").get<double>();
  file.report.thresholds.rr_trans = config.at("rr_trans").get<double>();
  file.manifest_file = config.value("manifest", "");
  file.results_dir = config.value("results_dir", "");
  for (const auto& row : j.at("pairs")) {
    PairEvaluation e;
    e.a = row.at("a").get<int>();
    e.b = row.at("b").get<int>();
    e.inlier_ratio = row.at("inlier_ratio").get<double>();
    e.num_matches = row.at("num_matches").get<std::size_t>();
    e.num_inliers = row.at("num_inliers").get<std::size_t>();
    e.empty_matches = row.at("empty_matches").get<bool>();
    e.rot_error_rad = row.at("rot_error_rad").get<double>();
    e.trans_error = row.at("trans_error").get<double>();
    e.registered = row.at("registered").get<bool>();
    file.report.pairs.push_back(e);
  }
  const auto& agg = j.at("aggregates");
  file.report.aggregates.ir_mean = agg.at("ir_mean").get<double>();
  file.report.aggregates.ir_pooled = agg.at("ir_pooled").get<double>();
  file.report.aggregates.fmr = agg.at("fmr").get<double>();
  file.report.aggregates.rr = agg.at("rr").get<double>();
  file.report.aggregates.matches_mean = agg.at("matches_mean").get<double>();
  return file;
}

}  // namespace sfmreg
