#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sfmreg/io.hpp"
#include "sfmreg/geometry.hpp"
#include "sfmreg/serialize.hpp"
#include "testutil.hpp"

#ifndef SFMREG_CLI_PATH
#define SFMREG_CLI_PATH "sfmreg"
#endif

using namespace sfmreg;
using namespace testutil;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string command =
      std::string(SFMREG_CLI_PATH) + " " + args + " 2>&1";
  std::FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buffer[4096];
  while (std::fgets(buffer, sizeof(buffer), pipe)) output += buffer;
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("ingest writes a PLY and sidecar for a valid fixture") {
  TempDir tmp;
  const auto recon = make_synthetic_reconstruction(10, 150, 1);
  write_colmap_fixture(recon, tmp.path() / "scene");
  const auto out = tmp.path() / "cloud.ply";
  const auto result =
      run_cli("ingest " + (tmp.path() / "scene").string() + " " + out.string());
  CHECK(result.exit_code == 0);
  CHECK(std::filesystem::exists(out));
  CHECK(std::filesystem::exists(out.string() + ".json"));
  const auto cloud = import_cloud_ply(out);
  CHECK(cloud.size() == recon.points.size());
  CHECK(cloud.has_normals());
}

TEST_CASE("ingest on a directory without points3D.txt names the file") {
  TempDir tmp;
  const auto recon = make_synthetic_reconstruction(8, 60, 2);
  write_colmap_fixture(recon, tmp.path() / "scene");
  std::filesystem::remove(tmp.path() / "scene" / "points3D.txt");
  const auto result = run_cli("ingest " + (tmp.path() / "scene").string() +
                              " " + (tmp.path() / "x.ply").string());
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("points3D.txt") != std::string::npos);
}

TEST_CASE("ingest reports the corrupt line number") {
  TempDir tmp;
  const auto recon = make_synthetic_reconstruction(8, 60, 3);
  write_colmap_fixture(recon, tmp.path() / "scene");
  // Corrupt line 17 of points3D.txt (the file has one header line).
  const auto path = tmp.path() / "scene" / "points3D.txt";
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  in.close();
  REQUIRE(lines.size() >= 17);
  lines[16] = "17 garbage";
  std::ofstream out(path);
  for (const auto& l : lines) out << l << "\n";
  out.close();

  const auto result = run_cli("ingest " + (tmp.path() / "scene").string() +
                              " " + (tmp.path() / "x.ply").string());
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("line 17") != std::string::npos);
}

TEST_CASE("gen-dataset produces a schema-valid manifest and partial clouds") {
  TempDir tmp;
  const auto recon = make_facade_scene(1500, 30, 4);
  write_colmap_fixture(recon, tmp.path() / "scene");
  const auto out_dir = tmp.path() / "dataset";
  const auto result = run_cli(
      "gen-dataset " + (tmp.path() / "scene").string() + " " +
      out_dir.string() +
      " --strategy random-points --target-images 10 --n-partials 4 --seed 9");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("pairs:") != std::string::npos);

  const auto manifest = read_manifest_json(out_dir / "manifest.json");
  CHECK(manifest.partial_files.size() == 4);
  for (const auto& name : manifest.partial_files) {
    CHECK(std::filesystem::exists(out_dir / name));
  }
  for (std::size_t e = 0; e < manifest.manifest.entries.size(); ++e) {
    CHECK(std::filesystem::exists(out_dir / manifest.pair_b_files[e]));
  }
}

TEST_CASE("gen-dataset with an unreachable overlap emits zero pairs") {
  TempDir tmp;
  const auto recon = make_facade_scene(600, 20, 5);
  write_colmap_fixture(recon, tmp.path() / "scene");
  const auto out_dir = tmp.path() / "dataset";
  const auto result = run_cli(
      "gen-dataset " + (tmp.path() / "scene").string() + " " +
      out_dir.string() +
      " --strategy random-points --target-images 8 --n-partials 3"
      " --min-overlap 1.01 --seed 2");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("warning") != std::string::npos);
  const auto manifest = read_manifest_json(out_dir / "manifest.json");
  CHECK(manifest.manifest.entries.empty());
}

TEST_CASE("gen-dataset is byte-identical across reruns and job counts") {
  TempDir tmp;
  const auto recon = make_facade_scene(900, 24, 6);
  write_colmap_fixture(recon, tmp.path() / "scene");
  const std::string base_args =
      "gen-dataset " + (tmp.path() / "scene").string() + " ";
  const std::string flags =
      " --strategy random-points --target-images 8 --n-partials 3 --seed 31";

  const auto d1 = tmp.path() / "run1";
  const auto d2 = tmp.path() / "run2";
  const auto d3 = tmp.path() / "run3";
  CHECK(run_cli(base_args + d1.string() + flags + " --jobs 1").exit_code == 0);
  CHECK(run_cli(base_args + d2.string() + flags + " --jobs 1").exit_code == 0);
  CHECK(run_cli(base_args + d3.string() + flags + " --jobs 8").exit_code == 0);

  for (const auto& entry : std::filesystem::directory_iterator(d1)) {
    const auto name = entry.path().filename();
    CAPTURE(name.string());
    CHECK(slurp(entry.path()) == slurp(d2 / name));
    CHECK(slurp(entry.path()) == slurp(d3 / name));
  }
}

TEST_CASE("register on a cloud and its copy is near-identity, reruns are "
          "byte-identical") {
  TempDir tmp;
  const auto recon = make_facade_scene(1200, 24, 7);
  write_colmap_fixture(recon, tmp.path() / "scene");
  const auto cloud_ply = tmp.path() / "cloud.ply";
  REQUIRE(run_cli("ingest " + (tmp.path() / "scene").string() + " " +
                  cloud_ply.string())
              .exit_code == 0);

  const std::string flags =
      " --superpoints 256 --coarse-k 128 --seed 5 --mode se3";
  const auto out1 = tmp.path() / "r1.json";
  const auto out2 = tmp.path() / "r2.json";
  const auto out3 = tmp.path() / "r3.json";
  const auto r1 = run_cli("register " + cloud_ply.string() + " " +
                          cloud_ply.string() + " --out " + out1.string() +
                          flags + " --jobs 1");
  CHECK(r1.exit_code == 0);
  CHECK(run_cli("register " + cloud_ply.string() + " " + cloud_ply.string() +
                " --out " + out2.string() + flags + " --jobs 1")
            .exit_code == 0);
  CHECK(run_cli("register " + cloud_ply.string() + " " + cloud_ply.string() +
                " --out " + out3.string() + flags + " --jobs 8")
            .exit_code == 0);

  const auto report = read_registration_report(out1);
  CHECK(rotation_angle_between(report.transform_scene.rotation,
                               Eigen::Matrix3d::Identity()) < 0.1 * M_PI / 180);
  // Unit-free bound: normalized frame, plus the scene frame relative to
  // the cloud's spread.
  CHECK(report.transform_normalized.translation.norm() < 1e-3);
  CHECK(report.transform_scene.translation.norm() <
        1e-3 * report.info_a.divisor);

  // Output files must match byte for byte across reruns and job counts
  // (the out path itself is not embedded; matches files share a name).
  auto normalize_json = [&](const std::filesystem::path& p) {
    std::string text = slurp(p);
    const std::string needle = p.stem().string();
    for (std::size_t at = text.find(needle); at != std::string::npos;
         at = text.find(needle, at)) {
      text.replace(at, needle.size(), "X");
    }
    return text;
  };
  CHECK(normalize_json(out1) == normalize_json(out2));
  CHECK(normalize_json(out1) == normalize_json(out3));
}

TEST_CASE("register on disjoint clouds exits with the registration code") {
  TempDir tmp;
  Rng rng(8);
  auto a = random_cloud(rng, 300, 1.0);
  auto b = random_cloud(rng, 300, 1.0);
  attach_random_normals(a, rng);
  attach_random_normals(b, rng);
  const auto pa = tmp.path() / "a.ply";
  const auto pb = tmp.path() / "b.ply";
  export_cloud_ply(a, pa);
  export_cloud_ply(b, pb);
  const auto result =
      run_cli("register " + pa.string() + " " + pb.string() + " --out " +
              (tmp.path() / "r.json").string() +
              " --superpoints 64 --coarse-k 32 --min-score 0.999");
  CHECK(result.exit_code == 3);
}

TEST_CASE("eval scores a perfect synthetic result sheet at 100%") {
  TempDir tmp;
  const auto recon = make_facade_scene(1500, 30, 9);
  write_colmap_fixture(recon, tmp.path() / "scene");
  const auto ds = tmp.path() / "dataset";
  REQUIRE(run_cli("gen-dataset " + (tmp.path() / "scene").string() + " " +
                  ds.string() +
                  " --strategy random-points --target-images 12 --n-partials 3"
                  " --min-overlap 0.2 --seed 12")
              .exit_code == 0);
  const auto manifest = read_manifest_json(ds / "manifest.json");
  REQUIRE(!manifest.manifest.entries.empty());

  // Fabricate perfect results straight from the ground truth.
  const auto results = tmp.path() / "results";
  std::filesystem::create_directories(results);
  for (std::size_t e = 0; e < manifest.manifest.entries.size(); ++e) {
    const auto& entry = manifest.manifest.entries[e];
    const auto cloud_a =
        import_cloud_ply(ds / manifest.partial_files[entry.a]);
    const auto cloud_b = import_cloud_ply(ds / manifest.pair_b_files[e]);
    const auto norm = normalize_pair(cloud_a, cloud_b, entry.mode);

    // Ground-truth correspondences via shared source ids are not stored in
    // PLY, so correspond by exact nearest neighbor under gt.
    CorrespondenceSet matches;
    const KdTree index(cloud_b.points);
    for (std::size_t r = 0; r < cloud_a.points.size(); ++r) {
      const auto hit = index.knn(entry.gt(cloud_a.points[r]), 1)[0];
      if (hit.distance < 1e-9) {
        matches.pairs.emplace_back(static_cast<int>(r), hit.index);
        matches.scores.push_back(1.0);
      }
    }
    REQUIRE(matches.size() >= 3);

    RegistrationReportFile report;
    report.config.mode = entry.mode;
    report.transform_scene = entry.gt;
    report.transform_normalized =
        conjugate_to_normalized(entry.gt, norm.info_p, norm.info_q);
    report.info_a = norm.info_p;
    report.info_b = norm.info_q;
    report.num_matches = static_cast<int>(matches.size());
    report.inlier_count = report.num_matches;
    report.matches_file = "pair_" + std::string(e < 10 ? "000" : "00") +
                          std::to_string(e) + "_matches.json";
    char stem[32];
    std::snprintf(stem, sizeof(stem), "pair_%04zu", e);
    report.matches_file = std::string(stem) + "_matches.json";
    export_matches_json(matches, results / report.matches_file);
    write_registration_report(report, results / (std::string(stem) + ".json"));
  }

  const auto result = run_cli("eval " + (ds / "manifest.json").string() + " " +
                              results.string());
  CHECK(result.exit_code == 0);
  const auto report = read_benchmark_report(results / "report.json");
  CHECK(report.report.aggregates.ir_mean == doctest::Approx(1.0));
  CHECK(report.report.aggregates.fmr == doctest::Approx(1.0));
  CHECK(report.report.aggregates.rr == doctest::Approx(1.0));
}

TEST_CASE("eval with a missing result file exits 4 and names the pair") {
  TempDir tmp;
  const auto recon = make_facade_scene(800, 24, 10);
  write_colmap_fixture(recon, tmp.path() / "scene");
  const auto ds = tmp.path() / "dataset";
  REQUIRE(run_cli("gen-dataset " + (tmp.path() / "scene").string() + " " +
                  ds.string() +
                  " --strategy random-points --target-images 10 --n-partials 3"
                  " --min-overlap 0.2 --seed 13")
              .exit_code == 0);
  const auto manifest = read_manifest_json(ds / "manifest.json");
  REQUIRE(!manifest.manifest.entries.empty());
  const auto results = tmp.path() / "results";
  std::filesystem::create_directories(results);
  const auto result = run_cli("eval " + (ds / "manifest.json").string() + " " +
                              results.string());
  CHECK(result.exit_code == 4);
  CHECK(result.output.find("pair 0") != std::string::npos);
}
