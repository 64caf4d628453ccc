#include "gsr/jbu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gsr/parallel.hpp"

namespace gsr {
namespace {

long long round_half_up(double v) { return std::llround(v); }

}  // namespace

void JbuParams::validate(int guide_channels) const {
  if (!(sigma_spatial > 0.0)) throw std::invalid_argument("JbuParams: sigma_spatial must be > 0");
  if (!(sigma_range > 0.0)) throw std::invalid_argument("JbuParams: sigma_range must be > 0");
  if (window_radius < 1) throw std::invalid_argument("JbuParams: window_radius must be >= 1");
  if (guide_mean.empty() != guide_std.empty()) {
    throw std::invalid_argument("JbuParams: guide_mean and guide_std must be given together");
  }
  if (!guide_mean.empty()) {
    if (guide_mean.size() != static_cast<std::size_t>(guide_channels) ||
        guide_std.size() != static_cast<std::size_t>(guide_channels)) {
      throw std::invalid_argument("JbuParams: standardization stats must have one entry per guide channel");
    }
    for (const double s : guide_std) {
      if (!(s > 0.0)) throw std::invalid_argument("JbuParams: guide_std entries must be > 0");
    }
  }
}

Raster standardize_guide(const Raster& guide, const std::vector<double>& mean, const std::vector<double>& stddev) {
  if (mean.size() != static_cast<std::size_t>(guide.channels) ||
      stddev.size() != static_cast<std::size_t>(guide.channels)) {
    throw std::invalid_argument("standardize_guide: stats must have one entry per channel");
  }
  Raster out(guide.channels, guide.height, guide.width, guide.units);
  const std::size_t n = guide.pixel_count();
  for (int c = 0; c < guide.channels; ++c) {
    if (!(stddev[c] > 0.0)) throw std::invalid_argument("standardize_guide: std must be > 0");
    const double inv = 1.0 / stddev[c];
    const double m = mean[c];
    const float* src = guide.channel(c);
    float* dst = out.channel(c);
    for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<float>((src[i] - m) * inv);
  }
  return out;
}

JbuResult jbu_upsample(const Raster& source, const Raster& guide, const JbuParams& params, int alpha) {
  if (alpha < 1) throw std::invalid_argument("jbu_upsample: alpha must be >= 1");
  if (source.channels != 1) throw dimension_error("jbu_upsample: source must have a single channel");
  if (guide.height != source.height * alpha || guide.width != source.width * alpha) {
    throw dimension_error("jbu_upsample: guide " + std::to_string(guide.height) + "x" + std::to_string(guide.width) +
                          " is not alpha * source " + std::to_string(source.height) + "x" +
                          std::to_string(source.width));
  }
  params.validate(guide.channels);

  const Raster* guide_ptr = &guide;
  Raster standardized;
  if (!params.guide_mean.empty()) {
    standardized = standardize_guide(guide, params.guide_mean, params.guide_std);
    guide_ptr = &standardized;
  }
  const Raster& g = *guide_ptr;

  const int lh = source.height;
  const int lw = source.width;
  const int hh = guide.height;
  const int hw = guide.width;
  const int radius = params.window_radius;
  const int channels = g.channels;
  const double inv_two_ss = 1.0 / (2.0 * params.sigma_spatial * params.sigma_spatial);
  const double inv_two_sr = 1.0 / (2.0 * params.sigma_range * params.sigma_range);

  // Per-axis precomputation: continuous LR coordinate and its rounded cell
  // for every HR index, plus the HR pixel nearest each LR cell center.
  std::vector<double> lr_y(hh), lr_x(hw);
  std::vector<int> cell_y(hh), cell_x(hw);
  for (int i = 0; i < hh; ++i) {
    lr_y[i] = (i + 0.5) / alpha - 0.5;
    cell_y[i] = static_cast<int>(round_half_up(lr_y[i]));
  }
  for (int j = 0; j < hw; ++j) {
    lr_x[j] = (j + 0.5) / alpha - 0.5;
    cell_x[j] = static_cast<int>(round_half_up(lr_x[j]));
  }
  std::vector<int> center_y(lh), center_x(lw);
  for (int q = 0; q < lh; ++q) {
    center_y[q] = std::clamp(static_cast<int>(round_half_up((q + 0.5) * alpha - 0.5)), 0, hh - 1);
  }
  for (int q = 0; q < lw; ++q) {
    center_x[q] = std::clamp(static_cast<int>(round_half_up((q + 0.5) * alpha - 0.5)), 0, hw - 1);
  }

  JbuResult result;
  result.output = Raster(1, hh, hw, source.units);
  float* out = result.output.values.data();
  const float* src = source.channel(0);

  constexpr std::size_t kRowChunk = 16;
  const std::size_t chunk_count = (static_cast<std::size_t>(hh) + kRowChunk - 1) / kRowChunk;
  std::vector<long long> fallbacks(chunk_count, 0);

  parallel_chunks(static_cast<std::size_t>(hh), kRowChunk, [&](std::size_t chunk, std::size_t y0, std::size_t y1) {
    std::vector<double> gp(channels);
    long long misses = 0;
    for (std::size_t yi = y0; yi < y1; ++yi) {
      const int y = static_cast<int>(yi);
      const int qy0 = std::max(0, cell_y[y] - radius);
      const int qy1 = std::min(lh - 1, cell_y[y] + radius);
      for (int x = 0; x < hw; ++x) {
        for (int c = 0; c < channels; ++c) gp[c] = g.at(c, y, x);
        const int qx0 = std::max(0, cell_x[x] - radius);
        const int qx1 = std::min(lw - 1, cell_x[x] + radius);
        double acc = 0.0, norm = 0.0;
        double acc_spatial = 0.0, norm_spatial = 0.0;
        for (int qy = qy0; qy <= qy1; ++qy) {
          const double dy = lr_y[y] - qy;
          const int gy = center_y[qy];
          for (int qx = qx0; qx <= qx1; ++qx) {
            const double dx = lr_x[x] - qx;
            const double f = std::exp(-(dy * dy + dx * dx) * inv_two_ss);
            double dist2 = 0.0;
            const int gx = center_x[qx];
            for (int c = 0; c < channels; ++c) {
              const double d = gp[c] - g.at(c, gy, gx);
              dist2 += d * d;
            }
            const double weight = f * std::exp(-dist2 * inv_two_sr);
            const double s = src[static_cast<std::size_t>(qy) * lw + qx];
            acc += weight * s;
            norm += weight;
            acc_spatial += f * s;
            norm_spatial += f;
          }
        }
        double value;
        if (norm > 0.0) {
          value = acc / norm;
        } else if (norm_spatial > 0.0) {
          // Range weights underflowed; fall back to spatial-only weights.
          value = acc_spatial / norm_spatial;
          ++misses;
        } else {
          value = src[static_cast<std::size_t>(std::clamp(cell_y[y], 0, lh - 1)) * lw +
                      std::clamp(cell_x[x], 0, lw - 1)];
          ++misses;
        }
        out[static_cast<std::size_t>(yi) * hw + x] = static_cast<float>(value);
      }
    }
    fallbacks[chunk] = misses;
  });

  for (const long long f : fallbacks) result.spatial_fallbacks += f;
  return result;
}

}  // namespace gsr
