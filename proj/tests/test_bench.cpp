#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gsr/bench.hpp"
#include "gsr/bundle.hpp"
#include "gsr/errors.hpp"
#include "gsr/interp.hpp"
#include "gsr/split.hpp"
#include "test_util.hpp"

using namespace gsr;
using namespace gsr::test;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

BenchConfig small_config(const fs::path& out_dir) {
  BenchConfig config;
  SynthParams synth;
  synth.seed = 21;
  synth.height = 32;
  synth.width = 32;
  synth.alpha = 4;
  synth.guide_channels = 2;
  synth.smooth_scale = 5;
  synth.texture_gain = 6.0;
  synth.noise_sigma = {0.3};
  config.synth = synth;
  config.synth_count = 25;  // 60/20/20 split leaves 5 test records
  config.alpha = 4;
  config.methods = {"nearest"};
  config.metrics_peak = 100.0;
  config.out_dir = out_dir;
  return config;
}

}  // namespace

TEST_CASE("config parsing, defaults and validation") {
  const BenchConfig config = parse_config_text(R"({
    "dataset": {"synth": {"seed": 3, "count": 4, "height": 16, "width": 16}},
    "alpha": 4,
    "methods": ["nearest", "jbu"],
    "jbu": {"sigma_range": 0.25},
    "p2p": {"max_iters": 17},
    "split": {"ratios": [0.5, 0.25, 0.25], "seed": 9},
    "metrics": {"peak": 123.0},
    "output": {"dir": "somewhere"}
  })");
  CHECK(config.alpha == 4);
  CHECK(config.methods == std::vector<std::string>{"nearest", "jbu"});
  CHECK(config.jbu.sigma_range == doctest::Approx(0.25));
  CHECK(config.jbu.sigma_spatial == doctest::Approx(1.0));  // default preserved
  CHECK(config.p2p.max_iters == 17);
  CHECK(config.metrics_peak == doctest::Approx(123.0));
  CHECK(config.split_ratios[0] == doctest::Approx(0.5));
  CHECK(config.out_dir == fs::path("somewhere"));

  CHECK_THROWS_AS(parse_config_text("{not json"), config_error);
  CHECK_THROWS_AS(parse_config_text(R"({"alpha": 2})"), config_error);  // no dataset
  CHECK_THROWS_WITH_AS(parse_config_text(R"({
      "dataset": {"synth": {"seed": 1, "count": 2}},
      "methods": ["warp9"]
    })"),
                       doctest::Contains("nearest"), config_error);
  CHECK_THROWS_AS(parse_config_text(R"({
      "alpha": 2,
      "dataset": {"synth": {"seed": 1, "count": 2, "alpha": 8}}
    })"),
                  config_error);
}

TEST_CASE("unknown method errors list the roster") {
  BenchConfig config;
  try {
    make_method("definitely-not-a-method", config);
    FAIL("expected config_error");
  } catch (const config_error& e) {
    const std::string what = e.what();
    for (const auto& name : method_names()) {
      CHECK(what.find(name) != std::string::npos);
    }
  }
}

TEST_CASE("run_benchmark row accounting") {
  TempDir tmp("gsr_bench_rows");
  const BenchConfig config = small_config(tmp.path / "out");
  CHECK(run_benchmark(config) == 0);

  const auto lines = lines_of(slurp(tmp.path / "out" / "results.csv"));
  REQUIRE(lines.size() == 1 + 5 + 1);  // header, five samples, aggregate
  CHECK(lines[0] == "method,sample_id,mae,rmse,psnr,ssim,peak_used");
  for (std::size_t i = 1; i <= 5; ++i) CHECK(lines[i].rfind("nearest,synth-", 0) == 0);
  CHECK(lines[6].rfind("nearest,aggregate,", 0) == 0);

  CHECK(fs::exists(tmp.path / "out" / "residual_bins.csv"));
  CHECK(fs::exists(tmp.path / "out" / "manifest.json"));
}

TEST_CASE("identical configs produce byte-identical results") {
  TempDir tmp("gsr_bench_determinism");
  BenchConfig config = small_config(tmp.path / "out_a");
  config.methods = {"nearest", "bilinear", "jbu"};
  CHECK(run_benchmark(config) == 0);
  config.out_dir = tmp.path / "out_b";
  CHECK(run_benchmark(config) == 0);
  CHECK(slurp(tmp.path / "out_a" / "results.csv") == slurp(tmp.path / "out_b" / "results.csv"));
  CHECK(slurp(tmp.path / "out_a" / "residual_bins.csv") == slurp(tmp.path / "out_b" / "residual_bins.csv"));
}

TEST_CASE("guided method wins on an edge-aligned synthetic set") {
  TempDir tmp("gsr_bench_guided");
  BenchConfig config = small_config(tmp.path / "out");
  config.methods = {"nearest", "bicubic", "jbu"};
  config.synth->guide_channels = 1;
  config.synth->texture_gain = 15.0;
  config.synth->noise_sigma = {0.0};
  config.synth->mix_target = {1.0};
  config.synth->mix_independent = {0.0};
  config.synth->smooth_scale = 8;
  CHECK(run_benchmark(config) == 0);

  double psnr_nearest = 0, psnr_bicubic = 0, psnr_jbu = 0;
  for (const auto& line : lines_of(slurp(tmp.path / "out" / "results.csv"))) {
    std::istringstream ss(line);
    std::string method, id, mae_s, rmse_s, psnr_s;
    std::getline(ss, method, ',');
    std::getline(ss, id, ',');
    std::getline(ss, mae_s, ',');
    std::getline(ss, rmse_s, ',');
    std::getline(ss, psnr_s, ',');
    if (id != "aggregate") continue;
    const double value = std::stod(psnr_s);
    if (method == "nearest") psnr_nearest = value;
    if (method == "bicubic") psnr_bicubic = value;
    if (method == "jbu") psnr_jbu = value;
  }
  MESSAGE("aggregate psnr nearest=", psnr_nearest, " bicubic=", psnr_bicubic, " jbu=", psnr_jbu);
  CHECK(psnr_jbu > psnr_bicubic);
  CHECK(psnr_jbu > psnr_nearest);
}

TEST_CASE("score_external reproduces the in-process report") {
  TempDir tmp("gsr_bench_score");
  BenchConfig config = small_config(tmp.path / "run");
  config.dump_predictions = true;
  CHECK(run_benchmark(config) == 0);

  // Scoring our own dumped nearest predictions gives identical metric
  // values (method label aside).
  BenchConfig score_config = config;
  score_config.out_dir = tmp.path / "score";
  CHECK(score_external(tmp.path / "run" / "predictions" / "nearest", score_config) == 0);

  const auto run_lines = lines_of(slurp(tmp.path / "run" / "results.csv"));
  const auto score_lines = lines_of(slurp(tmp.path / "score" / "results.csv"));
  REQUIRE(run_lines.size() == score_lines.size());
  for (std::size_t i = 1; i < run_lines.size(); ++i) {
    const std::string run_tail = run_lines[i].substr(run_lines[i].find(','));
    const std::string score_tail = score_lines[i].substr(score_lines[i].find(','));
    CHECK(run_tail == score_tail);
    CHECK(score_lines[i].rfind("external,", 0) == 0);
  }
}

TEST_CASE("score_external of perfect predictions") {
  TempDir tmp("gsr_bench_perfect");
  BenchConfig config = small_config(tmp.path / "out");
  const auto records = load_dataset(config);
  std::vector<std::string> ids;
  for (const auto& r : records) ids.push_back(r.id);
  const DatasetSplit split = split_dataset(ids, config.split_ratios, config.split_seed);

  const fs::path pred_dir = tmp.path / "pred";
  for (const auto& record : records) {
    if (std::find(split.test_ids.begin(), split.test_ids.end(), record.id) == split.test_ids.end()) continue;
    write_raster_bundle(record.target, record.id, pred_dir / record.id);
  }
  CHECK(score_external(pred_dir, config) == 0);
  const auto lines = lines_of(slurp(tmp.path / "out" / "results.csv"));
  bool saw_sample = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream ss(lines[i]);
    std::string method, id, mae_s, rmse_s, psnr_s, ssim_s;
    std::getline(ss, method, ',');
    std::getline(ss, id, ',');
    std::getline(ss, mae_s, ',');
    std::getline(ss, rmse_s, ',');
    std::getline(ss, psnr_s, ',');
    std::getline(ss, ssim_s, ',');
    CHECK(mae_s == "0.000000");
    CHECK(psnr_s == "inf");
    CHECK(ssim_s == "1.000000");
    saw_sample = true;
  }
  CHECK(saw_sample);
}

TEST_CASE("score_external skips missing ids and flags the run") {
  TempDir tmp("gsr_bench_missing");
  BenchConfig config = small_config(tmp.path / "out");
  const auto records = load_dataset(config);
  std::vector<std::string> ids;
  for (const auto& r : records) ids.push_back(r.id);
  const DatasetSplit split = split_dataset(ids, config.split_ratios, config.split_seed);
  REQUIRE(split.test_ids.size() == 5);

  const fs::path pred_dir = tmp.path / "pred";
  for (std::size_t i = 0; i + 1 < split.test_ids.size(); ++i) {  // drop the last one
    for (const auto& record : records) {
      if (record.id == split.test_ids[i]) {
        write_raster_bundle(upsample_nearest(record.source, record.alpha), record.id, pred_dir / record.id);
      }
    }
  }
  CHECK(score_external(pred_dir, config) == 1);
  const auto lines = lines_of(slurp(tmp.path / "out" / "results.csv"));
  CHECK(lines.size() == 1 + 4 + 1);  // header, four scored, aggregate

  const std::string manifest = slurp(tmp.path / "out" / "manifest.json");
  CHECK(manifest.find(split.test_ids.back()) != std::string::npos);
}

TEST_CASE("spectrum tool aggregates profiles over a dataset directory") {
  TempDir tmp("gsr_bench_spectrum");
  BenchConfig config = small_config(tmp.path / "out");
  const auto records = load_dataset(config);
  const fs::path data_dir = tmp.path / "data";
  for (std::size_t i = 0; i < 4; ++i) write_bundle(records[i], data_dir / records[i].id);

  const fs::path csv_path = tmp.path / "profile.csv";
  CHECK(run_spectrum_tool(data_dir, "target", config, csv_path) == 0);
  const auto lines = lines_of(slurp(csv_path));
  CHECK(lines[0] == "radius,mean_mag,std,count");
  CHECK(lines.size() == 1 + 17);  // radii 0..16 for 32x32 patches

  CHECK(run_spectrum_tool(data_dir, "bilinear", config, tmp.path / "bilinear.csv") == 0);
  CHECK_THROWS_AS(run_spectrum_tool(tmp.path / "nothing", "target", config, csv_path), config_error);
}

TEST_CASE("per-sample failures are recorded and the run continues") {
  TempDir tmp("gsr_bench_failures");
  BenchConfig config;
  SynthParams synth;
  synth.seed = 2;
  synth.height = 16;
  synth.width = 16;
  synth.alpha = 16;  // 1x1 sources cannot feed bicubic
  synth.guide_channels = 1;
  synth.smooth_scale = 2;
  config.synth = synth;
  config.synth_count = 10;
  config.alpha = 16;
  config.methods = {"nearest", "bicubic"};
  config.metrics_peak = 100.0;
  config.out_dir = tmp.path / "out";

  CHECK(run_benchmark(config) == 1);
  const auto lines = lines_of(slurp(tmp.path / "out" / "results.csv"));
  int nearest_rows = 0, bicubic_rows = 0;
  for (const auto& line : lines) {
    if (line.rfind("nearest,", 0) == 0) ++nearest_rows;
    if (line.rfind("bicubic,", 0) == 0) ++bicubic_rows;
  }
  CHECK(nearest_rows == 3);  // two test samples + aggregate
  CHECK(bicubic_rows == 0);
  CHECK(slurp(tmp.path / "out" / "manifest.json").find("bicubic/") != std::string::npos);
}

TEST_CASE("p2p runs emit per-sample diagnostics") {
  TempDir tmp("gsr_bench_p2pdiag");
  BenchConfig config = small_config(tmp.path / "out");
  config.synth_count = 10;  // two test records
  config.methods = {"p2p"};
  config.p2p.max_iters = 30;
  config.p2p.hidden_dims = {4};
  CHECK(run_benchmark(config) == 0);

  const auto records = load_dataset(config);
  std::vector<std::string> ids;
  for (const auto& r : records) ids.push_back(r.id);
  const DatasetSplit split = split_dataset(ids, config.split_ratios, config.split_seed);
  for (const auto& id : split.test_ids) {
    const auto lines = lines_of(slurp(tmp.path / "out" / "p2p_diagnostics" / (id + ".csv")));
    REQUIRE(lines.size() == 31);  // header + one row per iteration
    CHECK(lines[0] == "iteration,loss");
  }
}

TEST_CASE("throughput csv appears when repeats are configured") {
  TempDir tmp("gsr_bench_tp");
  BenchConfig config = small_config(tmp.path / "out");
  config.synth_count = 10;
  config.throughput_repeats = 3;
  config.methods = {"nearest", "bilinear"};
  CHECK(run_benchmark(config) == 0);
  const auto lines = lines_of(slurp(tmp.path / "out" / "throughput.csv"));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "method,mpix_per_s,repeats");
  CHECK(lines[1].rfind("nearest,", 0) == 0);
  CHECK(lines[2].rfind("bilinear,", 0) == 0);
}
