#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sfmreg/dataset.hpp"
#include "sfmreg/geometry.hpp"
#include "sfmreg/io.hpp"
#include "sfmreg/metrics.hpp"
#include "sfmreg/normals.hpp"
#include "sfmreg/pipeline.hpp"
#include "sfmreg/reconstruction.hpp"
#include "sfmreg/serialize.hpp"

namespace fs = std::filesystem;
using namespace sfmreg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRegistration = 3;
constexpr int kExitEvaluation = 4;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kNoModelFound:
    case ErrorCode::kNoSurvivingPairs:
    case ErrorCode::kInsufficientCorrespondences:
      return kExitRegistration;
    case ErrorCode::kMissingResult:
    case ErrorCode::kMissingGroundTruth:
      return kExitEvaluation;
    default:
      return kExitInput;
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SFMREG_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

std::string pair_stem(std::size_t index) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "pair_%04zu", index);
  return buffer;
}

std::string partial_stem(std::size_t index) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "partial_%03zu", index);
  return buffer;
}

void print_transform(const SimilarityTransform& T) {
  std::printf("  scale: %.9g\n", T.scale);
  for (int i = 0; i < 3; ++i) {
    std::printf("  R[%d]:  % .9f % .9f % .9f\n", i, T.rotation(i, 0),
                T.rotation(i, 1), T.rotation(i, 2));
  }
  std::printf("  t:     % .9g % .9g % .9g\n", T.translation.x(),
              T.translation.y(), T.translation.z());
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
  std::string colmap_dir;
  std::string out_cloud;
  int normals_k = 33;
  std::uint64_t seed = default_seed();
};

int run_ingest(const IngestOptions& opt) {
  const Reconstruction recon = parse_colmap_text(opt.colmap_dir);
  OrientedCloud cloud = extract_cloud(recon);
  const int k = std::min<int>(opt.normals_k, static_cast<int>(cloud.size()));
  bool oriented = false;
  if (k >= 3) {
    cloud = estimate_normals(cloud, k);
    cloud = orient_normals(recon, cloud, opt.seed);
    oriented = true;
  } else {
    std::fprintf(stderr, "warning: %zu points are too few for normals\n",
                 cloud.size());
  }
  export_cloud_ply(cloud, opt.out_cloud);

  nlohmann::json sidecar;
  sidecar["schema"] = 1;
  sidecar["config"] = {{"normals_k", opt.normals_k},
                       {"orient_seed", opt.seed},
                       {"source", opt.colmap_dir}};
  sidecar["point_ids"] = cloud.source_point_ids;
  sidecar["normals_oriented"] = oriented;
  sidecar["dropped_short_tracks"] = recon.dropped_short_tracks;
  std::ofstream side(opt.out_cloud + ".json");
  side << sidecar.dump(2) << "\n";

  std::printf("ingested %zu points, %zu images, %zu cameras -> %s\n",
              recon.points.size(), recon.images.size(), recon.cameras.size(),
              opt.out_cloud.c_str());
  if (recon.dropped_short_tracks > 0) {
    std::printf("dropped %zu short tracks\n", recon.dropped_short_tracks);
  }
  return kExitOk;
}

// ----------------------------------------------------------- gen-dataset

struct GenDatasetOptions {
  std::string colmap_dir;
  std::string out_dir;
  std::string mode = "se3";
  std::string strategy = "both";
  double min_overlap = 0.30;
  double overlap_tau = 0.1;
  int n_low = 75;
  int n_high = 300;
  int target_images = 200;
  int n_partials = 10;
  double scale_min = 0.5;
  double scale_max = 2.0;
  int normals_k = 33;
  std::uint64_t seed = default_seed();
  int jobs = 1;
};

int run_gen_dataset(const GenDatasetOptions& opt) {
  const Reconstruction recon = parse_colmap_text(opt.colmap_dir);
  fs::create_directories(opt.out_dir);

  DatasetGenConfig config;
  config.trajectory.n_low = opt.n_low;
  config.trajectory.n_high = opt.n_high;
  config.target_images = opt.target_images;
  config.n_partials = opt.n_partials;
  config.strategy = opt.strategy;
  config.normals_k = opt.normals_k;
  config.manifest.min_overlap = opt.min_overlap;
  config.manifest.overlap_tau = opt.overlap_tau;
  config.manifest.mode = parse_transform_mode(opt.mode);
  config.manifest.scale_min = opt.scale_min;
  config.manifest.scale_max = opt.scale_max;
  config.manifest.seed = derive_seed(opt.seed, 0x6d616e);
  config.manifest.jobs = opt.jobs;

  std::vector<PartialReconstruction> partials;
  std::size_t n_trajectories = 0;
  auto add_partial = [&](const std::vector<int>& image_ids,
                         const std::string& origin, std::uint64_t stream) {
    BuildPartialParams params;
    params.normals_k = opt.normals_k;
    params.orient_seed = derive_seed(opt.seed, 0x6f72, stream);
    try {
      partials.push_back(build_partial(recon, image_ids, params));
      partials.back().origin = origin;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyPartial) throw;
      std::fprintf(stderr, "warning: skipping empty partial (%s)\n",
                   origin.c_str());
    }
  };

  if (opt.strategy == "both" || opt.strategy == "trajectories") {
    const auto trajectories = generate_all_trajectories(
        recon, config.trajectory, derive_seed(opt.seed, 0x747261));
    n_trajectories = trajectories.size();
    for (std::size_t t = 0; t < trajectories.size(); ++t) {
      add_partial(trajectories[t].image_ids, "trajectory", t);
    }
  }
  if (opt.strategy == "both" || opt.strategy == "random-points") {
    const auto subsets = sample_partial_random_points(
        recon, opt.target_images, opt.n_partials,
        derive_seed(opt.seed, 0x727074));
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      add_partial(subsets[s], "random_points", 1000 + s);
    }
  }

  const PairManifest manifest = build_pair_manifest(partials, config.manifest);
  if (manifest.entries.empty()) {
    std::fprintf(stderr,
                 "warning: no pair reached the overlap threshold %.3f\n",
                 opt.min_overlap);
  }

  ManifestFile file;
  file.config = config;
  file.manifest = manifest;
  double overlap_sum = 0.0;
  for (std::size_t p = 0; p < partials.size(); ++p) {
    const std::string name = partial_stem(p) + ".ply";
    export_cloud_ply(partials[p].cloud, fs::path(opt.out_dir) / name);
    file.partial_files.push_back(name);
    file.partial_origins.push_back(partials[p].origin);
  }
  for (std::size_t e = 0; e < manifest.entries.size(); ++e) {
    const auto& entry = manifest.entries[e];
    const std::string name = pair_stem(e) + "_b.ply";
    export_cloud_ply(perturbed_cloud(partials[entry.b], entry),
                     fs::path(opt.out_dir) / name);
    file.pair_b_files.push_back(name);
    overlap_sum += entry.overlap;
  }
  write_manifest_json(file, fs::path(opt.out_dir) / "manifest.json");

  std::printf(
      "trajectories: %zu\npartials: %zu\npairs: %zu\nmean overlap: %.4f\n",
      n_trajectories, partials.size(), manifest.entries.size(),
      manifest.entries.empty() ? 0.0
                               : overlap_sum / manifest.entries.size());
  return kExitOk;
}

// -------------------------------------------------------------- register

struct RegisterOptions {
  std::string cloud_a;
  std::string cloud_b;
  std::string out_json;
  std::string matches_out;
  std::string mode = "se3";
  std::string features = "ppf";
  PipelineParams params;
  bool emit_timing = false;
};

int run_register(RegisterOptions& opt) {
  opt.params.mode = parse_transform_mode(opt.mode);
  if (opt.features != "ppf") {
    const std::string prefix = "import:";
    if (opt.features.rfind(prefix, 0) != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--features expects 'ppf' or 'import:<a.feat>,<b.feat>'");
    }
    const std::string rest = opt.features.substr(prefix.size());
    const auto comma = rest.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "import features need two comma-separated paths");
    }
    opt.params.import_features_a = rest.substr(0, comma);
    opt.params.import_features_b = rest.substr(comma + 1);
  }

  const OrientedCloud a = import_cloud_ply(opt.cloud_a);
  const OrientedCloud b = import_cloud_ply(opt.cloud_b);

  const auto start = std::chrono::steady_clock::now();
  const PipelineResult result = register_clouds(a, b, opt.params);
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();

  const std::string matches_file =
      opt.matches_out.empty()
          ? fs::path(opt.out_json).replace_extension("").string() +
                "_matches.json"
          : opt.matches_out;
  export_matches_json(result.matches, matches_file);

  RegistrationReportFile report;
  report.config = opt.params;
  report.transform_scene = result.transform_scene;
  report.transform_normalized = result.transform_normalized;
  report.info_a = result.info_a;
  report.info_b = result.info_b;
  report.num_matches = static_cast<int>(result.matches.size());
  report.inlier_count = result.registration.inlier_count;
  report.inlier_rms = result.registration.inlier_rms;
  report.iterations = result.registration.iterations;
  report.superpoint_count_a = result.superpoint_count_a;
  report.superpoint_count_b = result.superpoint_count_b;
  report.coarse_pair_count = result.coarse_pair_count;
  report.cloud_a = opt.cloud_a;
  report.cloud_b = opt.cloud_b;
  report.matches_file = fs::path(matches_file).filename().string();
  if (opt.emit_timing) report.timing_ms = elapsed_ms;
  write_registration_report(report, opt.out_json);

  std::printf("registered %s -> %s\n", opt.cloud_a.c_str(),
              opt.cloud_b.c_str());
  std::printf("transform (scene frame):\n");
  print_transform(result.transform_scene);
  std::printf("matches: %d, inliers: %d (rms %.6g), ransac iterations: %d\n",
              report.num_matches, report.inlier_count, report.inlier_rms,
              report.iterations);
  std::printf("elapsed: %.1f ms\n", elapsed_ms);
  return kExitOk;
}

// ------------------------------------------------------------------ eval

struct EvalOptions {
  std::string manifest_path;
  std::string results_dir;
  std::string out_json;
  MetricThresholds thresholds;
};

int run_eval(const EvalOptions& opt) {
  const ManifestFile manifest = read_manifest_json(opt.manifest_path);
  const fs::path manifest_dir = fs::path(opt.manifest_path).parent_path();
  if (manifest.manifest.entries.empty()) {
    throw Error(ErrorCode::kMissingGroundTruth, "manifest has no pairs");
  }

  std::vector<PairEvaluation> evals;
  for (std::size_t e = 0; e < manifest.manifest.entries.size(); ++e) {
    const PairEntry& entry = manifest.manifest.entries[e];
    const fs::path result_path =
        fs::path(opt.results_dir) / (pair_stem(e) + ".json");
    if (!fs::exists(result_path)) {
      throw Error(ErrorCode::kMissingResult,
                  "no result for pair " + std::to_string(e) + " (expected " +
                      result_path.string() + ")");
    }
    const RegistrationReportFile result =
        read_registration_report(result_path);
    const CorrespondenceSet matches = import_matches_json(
        fs::path(opt.results_dir) / result.matches_file);

    const OrientedCloud cloud_a = import_cloud_ply(
        manifest_dir / manifest.partial_files.at(entry.a));
    const OrientedCloud cloud_b =
        import_cloud_ply(manifest_dir / manifest.pair_b_files.at(e));

    auto normalize = [](const OrientedCloud& cloud,
                        const NormalizationInfo& info) {
      OrientedCloud out = cloud;
      for (auto& p : out.points) p = (p - info.centroid) / info.divisor;
      return out;
    };
    const OrientedCloud an = normalize(cloud_a, result.info_a);
    const OrientedCloud bn = normalize(cloud_b, result.info_b);
    const SimilarityTransform gt_norm =
        conjugate_to_normalized(entry.gt, result.info_a, result.info_b);

    evals.push_back(evaluate_pair(entry.a, entry.b, matches, an, bn, gt_norm,
                                  result.transform_normalized,
                                  opt.thresholds));
  }

  const BenchmarkReport report = aggregate(evals, opt.thresholds);
  BenchmarkReportFile file;
  file.report = report;
  file.manifest_file = opt.manifest_path;
  file.results_dir = opt.results_dir;
  const std::string out = opt.out_json.empty()
                              ? (fs::path(opt.results_dir) / "report.json").string()
                              : opt.out_json;
  write_benchmark_report(file, out);

  std::printf("pairs evaluated: %zu\n", evals.size());
  std::printf("%-28s | %6s | %6s | %6s\n", "", "IR", "FMR", "RR");
  std::printf("%-28s | %5.1f%% | %5.1f%% | %5.1f%%\n", "classical ppf",
              100.0 * report.aggregates.ir_mean, 100.0 * report.aggregates.fmr,
              100.0 * report.aggregates.rr);
  std::printf("mean matches: %.1f, pooled IR: %.3f\n",
              report.aggregates.matches_mean, report.aggregates.ir_pooled);
  std::printf("report: %s\n", out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SfM point cloud registration and dataset tooling"};
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* cmd_ingest =
      app.add_subcommand("ingest", "Parse a COLMAP text export into a PLY cloud "
                                   "with oriented normals");
  cmd_ingest->add_option("colmap_dir", ingest.colmap_dir)->required();
  cmd_ingest->add_option("out_cloud", ingest.out_cloud)->required();
  cmd_ingest->add_option("--normals-k", ingest.normals_k);
  cmd_ingest->add_option("--seed", ingest.seed);

  GenDatasetOptions gen;
  auto* cmd_gen = app.add_subcommand(
      "gen-dataset", "Synthesize registration pairs from one reconstruction");
  cmd_gen->add_option("colmap_dir", gen.colmap_dir)->required();
  cmd_gen->add_option("out_dir", gen.out_dir)->required();
  cmd_gen->add_option("--mode", gen.mode)->check(CLI::IsMember({"se3", "sim3"}));
  cmd_gen->add_option("--strategy", gen.strategy)
      ->check(CLI::IsMember({"both", "trajectories", "random-points"}));
  cmd_gen->add_option("--min-overlap", gen.min_overlap);
  cmd_gen->add_option("--overlap-tau", gen.overlap_tau);
  cmd_gen->add_option("--n-low", gen.n_low);
  cmd_gen->add_option("--n-high", gen.n_high);
  cmd_gen->add_option("--target-images", gen.target_images);
  cmd_gen->add_option("--n-partials", gen.n_partials);
  cmd_gen->add_option("--scale-min", gen.scale_min);
  cmd_gen->add_option("--scale-max", gen.scale_max);
  cmd_gen->add_option("--normals-k", gen.normals_k);
  cmd_gen->add_option("--seed", gen.seed);
  cmd_gen->add_option("--jobs", gen.jobs);

  RegisterOptions reg;
  auto* cmd_register = app.add_subcommand(
      "register", "Estimate the similarity transform between two clouds");
  cmd_register->add_option("cloud_a", reg.cloud_a)->required();
  cmd_register->add_option("cloud_b", reg.cloud_b)->required();
  cmd_register->add_option("--out", reg.out_json)->required();
  cmd_register->add_option("--matches-out", reg.matches_out);
  cmd_register->add_option("--mode", reg.mode)
      ->check(CLI::IsMember({"se3", "sim3"}));
  cmd_register->add_option("--features", reg.features,
                           "ppf or import:<a.feat>,<b.feat>");
  cmd_register->add_option("--normals-k", reg.params.normals_k);
  cmd_register->add_option("--superpoints", reg.params.superpoints);
  cmd_register->add_option("--radius", reg.params.descriptor.radius);
  cmd_register->add_option("--distance-bins", reg.params.descriptor.distance_bins);
  cmd_register->add_option("--angle-bins", reg.params.descriptor.angle_bins);
  cmd_register->add_flag("--knn-support", reg.params.descriptor.knn_support,
                         "Use k-NN descriptor support instead of the radius ball");
  cmd_register->add_option("--support-k", reg.params.descriptor.support_k);
  cmd_register->add_option("--coarse-k", reg.params.coarse.k);
  cmd_register->add_option("--mutual-rank", reg.params.coarse.mutual_rank);
  cmd_register->add_option("--min-score", reg.params.coarse.min_score);
  cmd_register->add_option("--group-size", reg.params.group_size);
  cmd_register->add_option("--sinkhorn-iters",
                           reg.params.sinkhorn_params.iterations);
  cmd_register->add_option("--temperature",
                           reg.params.sinkhorn_params.temperature);
  cmd_register->add_option("--slack-score",
                           reg.params.sinkhorn_params.slack_score);
  cmd_register->add_option("--confidence-min", reg.params.confidence_min);
  cmd_register->add_option("--ransac-threshold",
                           reg.params.ransac.inlier_threshold);
  cmd_register->add_option("--max-correspondences",
                           reg.params.ransac.max_correspondences);
  cmd_register->add_option("--max-iterations",
                           reg.params.ransac.max_iterations);
  cmd_register->add_option("--confidence", reg.params.ransac.confidence);
  cmd_register->add_option("--seed", reg.params.seed);
  cmd_register->add_option("--jobs", reg.params.jobs);
  cmd_register->add_flag("--emit-timing", reg.emit_timing,
                         "Record wall time in the output JSON (breaks "
                         "byte-identical reruns)");

  EvalOptions eval;
  auto* cmd_eval = app.add_subcommand(
      "eval", "Score per-pair registration results against a manifest");
  cmd_eval->add_option("manifest", eval.manifest_path)->required();
  cmd_eval->add_option("results_dir", eval.results_dir)->required();
  cmd_eval->add_option("--out", eval.out_json);
  cmd_eval->add_option("--tau-ir", eval.thresholds.tau_ir);
  cmd_eval->add_option("--tau-fmr", eval.thresholds.tau_fmr);
  cmd_eval->add_option("--rr-rot", eval.thresholds.rr_rot_deg);
  cmd_eval->add_option("--rr-trans", eval.thresholds.rr_trans);

  reg.params.seed = default_seed();
  gen.seed = default_seed();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_ingest->parsed()) return run_ingest(ingest);
    if (cmd_gen->parsed()) return run_gen_dataset(gen);
    if (cmd_register->parsed()) return run_register(reg);
    if (cmd_eval->parsed()) return run_eval(eval);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}
