#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gsr/patch_record.hpp"
#include "gsr/raster.hpp"

namespace gsr {

/// Regression and perception metrics of one prediction against its
/// reference, plus the peak value PSNR/SSIM were computed with.
struct MetricReport {
  double mae = 0.0;
  double rmse = 0.0;
  double psnr = 0.0;  // dB, +inf for identical inputs
  double ssim = 0.0;
  double peak_used = 0.0;
  long long n_pixels = 0;
};

double mae(const Raster& pred, const Raster& ref);
double rmse(const Raster& pred, const Raster& ref);

/// 20 * log10(peak / rmse); +inf when the error vanishes.
double psnr(const Raster& pred, const Raster& ref, double peak);
double psnr_from_rmse(double rmse_value, double peak);

/// Mean SSIM over fully interior window positions, gaussian 11x11 window
/// with sigma 1.5, C1 = (0.01 peak)^2, C2 = (0.03 peak)^2. Requires
/// single-channel inputs at least 11x11.
double ssim(const Raster& pred, const Raster& ref, double peak);

MetricReport evaluate(const Raster& pred, const Raster& ref, double peak);

struct BinSummary {
  long long count = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
};

/// Prediction-minus-reference error summaries per reference-value bin,
/// computed on a seeded uniform pixel subsample of the whole set.
struct ResidualBins {
  std::vector<double> bin_edges;
  std::vector<BinSummary> bins;  // bin_edges.size() - 1 entries
  long long sample_count = 0;    // pixels actually drawn
  std::uint64_t seed = 0;
};

ResidualBins residual_bins(const std::vector<Raster>& preds, const std::vector<Raster>& refs,
                           const std::vector<double>& bin_edges, long long sample_count = 10000,
                           std::uint64_t seed = 0);

/// Millions of output pixels per second.
double mpix_rate(long long pixels, double seconds);

using SampleFn = std::function<Raster(const PatchRecord&)>;

struct ThroughputResult {
  double mpix_per_s = 0.0;        // median over repeats
  std::vector<double> per_repeat;
};

/// One untimed warm-up pass over the records, then `repeats` timed full
/// passes; reports the median rate. Records must be preloaded; timing
/// covers inference only.
ThroughputResult throughput(const SampleFn& method, const std::vector<PatchRecord>& records, int repeats);

}  // namespace gsr
