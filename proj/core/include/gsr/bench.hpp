#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsr/jbu.hpp"
#include "gsr/p2p.hpp"
#include "gsr/patch_record.hpp"
#include "gsr/synth.hpp"

namespace gsr {

/// Every upsampler consumes exactly (source, guide) and produces the HR
/// map; unguided methods ignore the guide but are invoked identically.
using Upsampler = std::function<Raster(const Raster& source, const Raster& guide)>;

/// Benchmark configuration; every field has a default and the effective
/// values are echoed into the run manifest.
struct BenchConfig {
  // Dataset: either a directory of patch bundles or inline synthesis.
  std::optional<std::filesystem::path> dataset_path;
  std::optional<SynthParams> synth;
  int synth_count = 0;

  int alpha = 8;
  std::vector<std::string> methods;
  JbuParams jbu;
  P2pConfig p2p;

  std::array<double, 3> split_ratios{0.6, 0.2, 0.2};
  std::uint64_t split_seed = 42;

  double metrics_peak = 10330.0;  // t/px

  std::vector<double> residual_bin_edges;  // empty = 8 equal bins over the test targets
  long long residual_sample_count = 10000;
  std::uint64_t residual_seed = 7;

  int throughput_repeats = 0;  // 0 disables timing
  bool emit_spectrum = false;
  bool dump_predictions = false;

  std::filesystem::path out_dir = "out";
};

/// Parses the JSON configuration (see README for the schema). Unknown
/// method names and contradictory settings raise config_error.
BenchConfig load_config(const std::filesystem::path& config_path);
BenchConfig parse_config_text(const std::string& json_text);

const std::vector<std::string>& method_names();

/// Builds the dispatch closure for a method name; throws config_error
/// listing the valid names for unknown ones.
Upsampler make_method(const std::string& name, const BenchConfig& config);

/// Loads (or synthesizes) the configured dataset.
std::vector<PatchRecord> load_dataset(const BenchConfig& config);

/// Runs every configured method over the test split, writes results.csv,
/// residual_bins.csv, optional spectrum.csv / throughput.csv / prediction
/// dumps, and manifest.json under config.out_dir. Returns 0 on success,
/// 1 when any sample failed (failures are recorded and the run
/// continues).
int run_benchmark(const BenchConfig& config);

/// Same metric pipeline over externally supplied prediction bundles
/// (one raster bundle per test id under predictions_dir); no upsampler
/// runs. Missing predictions are reported and skipped.
int score_external(const std::filesystem::path& predictions_dir, const BenchConfig& config);

/// Radial spectrum of a method's predictions (or of the targets, method
/// "target") over every bundle under input_dir, aggregated across
/// samples and written as CSV columns radius,mean_mag,std,count.
int run_spectrum_tool(const std::filesystem::path& input_dir, const std::string& method, const BenchConfig& config,
                      const std::filesystem::path& out_csv);

}  // namespace gsr
