#include "gsr/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "gsr/errors.hpp"
#include "gsr/rng.hpp"

namespace gsr {
namespace {

void check_same_dims(const Raster& pred, const Raster& ref, const char* op) {
  if (pred.channels != ref.channels || pred.height != ref.height || pred.width != ref.width) {
    throw dimension_error(std::string(op) + ": shape mismatch, " + std::to_string(pred.channels) + "x" +
                          std::to_string(pred.height) + "x" + std::to_string(pred.width) + " vs " +
                          std::to_string(ref.channels) + "x" + std::to_string(ref.height) + "x" +
                          std::to_string(ref.width));
  }
}

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

// Valid-mode separable correlation with a normalized 1-D kernel.
std::vector<double> valid_filter(const std::vector<double>& image, int height, int width,
                                 const std::vector<double>& kernel) {
  const int k = static_cast<int>(kernel.size());
  const int ow = width - k + 1;
  const int oh = height - k + 1;
  std::vector<double> horiz(static_cast<std::size_t>(height) * ow);
  for (int y = 0; y < height; ++y) {
    const double* row = image.data() + static_cast<std::size_t>(y) * width;
    double* out = horiz.data() + static_cast<std::size_t>(y) * ow;
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += kernel[i] * row[x + i];
      out[x] = acc;
    }
  }
  std::vector<double> result(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    double* out = result.data() + static_cast<std::size_t>(y) * ow;
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += kernel[i] * horiz[static_cast<std::size_t>(y + i) * ow + x];
      out[x] = acc;
    }
  }
  return result;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted[0];
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

double mae(const Raster& pred, const Raster& ref) {
  check_same_dims(pred, ref, "mae");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    acc += std::abs(static_cast<double>(pred.values[i]) - ref.values[i]);
  }
  return acc / static_cast<double>(pred.values.size());
}

double rmse(const Raster& pred, const Raster& ref) {
  check_same_dims(pred, ref, "rmse");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    const double d = static_cast<double>(pred.values[i]) - ref.values[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(pred.values.size()));
}

double psnr_from_rmse(double rmse_value, double peak) {
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be > 0");
  if (rmse_value == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(peak / rmse_value);
}

double psnr(const Raster& pred, const Raster& ref, double peak) {
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be > 0");
  return psnr_from_rmse(rmse(pred, ref), peak);
}

double ssim(const Raster& pred, const Raster& ref, double peak) {
  check_same_dims(pred, ref, "ssim");
  if (!(peak > 0.0)) throw std::invalid_argument("ssim: peak must be > 0");
  if (pred.channels != 1) throw dimension_error("ssim: single-channel rasters only");
  if (pred.height < kSsimWindow || pred.width < kSsimWindow) {
    throw dimension_error("ssim: image " + std::to_string(pred.height) + "x" + std::to_string(pred.width) +
                          " is smaller than the " + std::to_string(kSsimWindow) + "x" +
                          std::to_string(kSsimWindow) + " window");
  }

  std::vector<double> kernel(kSsimWindow);
  {
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
      const double d = i - (kSsimWindow - 1) / 2.0;
      kernel[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
      sum += kernel[i];
    }
    for (double& k : kernel) k /= sum;
  }

  const std::size_t n = pred.pixel_count();
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = pred.values[i];
    y[i] = ref.values[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const int h = pred.height, w = pred.width;
  const auto mu_x = valid_filter(x, h, w, kernel);
  const auto mu_y = valid_filter(y, h, w, kernel);
  const auto m_xx = valid_filter(xx, h, w, kernel);
  const auto m_yy = valid_filter(yy, h, w, kernel);
  const auto m_xy = valid_filter(xy, h, w, kernel);

  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  double acc = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i], my = mu_y[i];
    const double var_x = m_xx[i] - mx * mx;
    const double var_y = m_yy[i] - my * my;
    const double cov = m_xy[i] - mx * my;
    acc += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (var_x + var_y + c2));
  }
  return acc / static_cast<double>(mu_x.size());
}

MetricReport evaluate(const Raster& pred, const Raster& ref, double peak) {
  MetricReport report;
  report.mae = mae(pred, ref);
  report.rmse = rmse(pred, ref);
  report.psnr = psnr_from_rmse(report.rmse, peak);
  report.ssim = ssim(pred, ref, peak);
  report.peak_used = peak;
  report.n_pixels = static_cast<long long>(pred.values.size());
  return report;
}

ResidualBins residual_bins(const std::vector<Raster>& preds, const std::vector<Raster>& refs,
                           const std::vector<double>& bin_edges, long long sample_count, std::uint64_t seed) {
  if (preds.size() != refs.size() || preds.empty()) {
    throw std::invalid_argument("residual_bins: prediction and reference lists must align and be non-empty");
  }
  if (bin_edges.size() < 2 || !std::is_sorted(bin_edges.begin(), bin_edges.end()) ||
      std::adjacent_find(bin_edges.begin(), bin_edges.end()) != bin_edges.end()) {
    throw std::invalid_argument("residual_bins: bin edges must be strictly increasing");
  }
  if (sample_count < 1) throw std::invalid_argument("residual_bins: sample_count must be >= 1");

  std::uint64_t total = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    check_same_dims(preds[i], refs[i], "residual_bins");
    total += preds[i].values.size();
  }

  // Seeded sample of pixel indices over the whole set, without
  // replacement (Floyd), then visited in ascending order.
  std::vector<std::uint64_t> picks;
  const auto k = static_cast<std::uint64_t>(sample_count);
  if (k >= total) {
    picks.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) picks[i] = i;
  } else {
    Xoshiro256ss rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(k) * 2);
    for (std::uint64_t j = total - k; j < total; ++j) {
      const std::uint64_t t = rng.next_below(j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    picks.assign(chosen.begin(), chosen.end());
    std::sort(picks.begin(), picks.end());
  }

  const std::size_t nbins = bin_edges.size() - 1;
  std::vector<std::vector<double>> per_bin(nbins);
  std::size_t record = 0;
  std::uint64_t record_base = 0;
  for (const std::uint64_t pick : picks) {
    while (pick >= record_base + preds[record].values.size()) {
      record_base += preds[record].values.size();
      ++record;
    }
    const auto offset = static_cast<std::size_t>(pick - record_base);
    const double ref_value = refs[record].values[offset];
    const double error = static_cast<double>(preds[record].values[offset]) - ref_value;
    if (ref_value < bin_edges.front() || ref_value > bin_edges.back()) continue;
    std::size_t bin = static_cast<std::size_t>(
                          std::upper_bound(bin_edges.begin(), bin_edges.end(), ref_value) - bin_edges.begin());
    bin = bin > 0 ? bin - 1 : 0;
    if (bin >= nbins) bin = nbins - 1;  // top edge inclusive
    per_bin[bin].push_back(error);
  }

  ResidualBins result;
  result.bin_edges = bin_edges;
  result.sample_count = static_cast<long long>(picks.size());
  result.seed = seed;
  result.bins.resize(nbins);
  for (std::size_t b = 0; b < nbins; ++b) {
    auto& samples = per_bin[b];
    auto& summary = result.bins[b];
    summary.count = static_cast<long long>(samples.size());
    if (samples.empty()) continue;
    std::sort(samples.begin(), samples.end());
    summary.q1 = quantile_sorted(samples, 0.25);
    summary.median = quantile_sorted(samples, 0.5);
    summary.q3 = quantile_sorted(samples, 0.75);
    double sum = 0.0;
    for (const double v : samples) sum += v;
    summary.mean = sum / static_cast<double>(samples.size());
  }
  return result;
}

double mpix_rate(long long pixels, double seconds) {
  if (!(seconds > 0.0)) throw std::invalid_argument("mpix_rate: seconds must be > 0");
  return static_cast<double>(pixels) / seconds / 1e6;
}

ThroughputResult throughput(const SampleFn& method, const std::vector<PatchRecord>& records, int repeats) {
  if (records.empty()) throw std::invalid_argument("throughput: at least one record required");
  if (repeats < 1) throw std::invalid_argument("throughput: repeats must be >= 1");

  // Warm-up pass, untimed.
  long long pixels = 0;
  for (const auto& record : records) {
    const Raster out = method(record);
    pixels += static_cast<long long>(out.pixel_count());
  }

  ThroughputResult result;
  result.per_repeat.reserve(static_cast<std::size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    for (const auto& record : records) {
      const Raster out = method(record);
      (void)out;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    result.per_repeat.push_back(mpix_rate(pixels, std::max(elapsed.count(), 1e-9)));
  }
  std::vector<double> sorted = result.per_repeat;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  result.mpix_per_s = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return result;
}

}  // namespace gsr
