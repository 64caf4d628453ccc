#include "gsr/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gsr {
namespace {

void check_alpha(int alpha) {
  if (alpha < 1) throw std::invalid_argument("upsample: alpha must be >= 1");
}

double lr_coord(int hr_index, int alpha) { return (hr_index + 0.5) / alpha - 0.5; }

struct Taps {
  std::vector<int> index;     // flattened taps_per_sample entries per output index
  std::vector<double> weight;
  int per_sample;
};

Taps linear_taps(int out_size, int in_size, int alpha) {
  Taps taps{{}, {}, 2};
  taps.index.resize(static_cast<std::size_t>(out_size) * 2);
  taps.weight.resize(static_cast<std::size_t>(out_size) * 2);
  for (int o = 0; o < out_size; ++o) {
    const double x = lr_coord(o, alpha);
    const double base = std::floor(x);
    const double frac = x - base;
    const int i0 = static_cast<int>(base);
    taps.index[2 * o] = std::clamp(i0, 0, in_size - 1);
    taps.index[2 * o + 1] = std::clamp(i0 + 1, 0, in_size - 1);
    taps.weight[2 * o] = 1.0 - frac;
    taps.weight[2 * o + 1] = frac;
  }
  return taps;
}

Taps cubic_taps(int out_size, int in_size, int alpha) {
  Taps taps{{}, {}, 4};
  taps.index.resize(static_cast<std::size_t>(out_size) * 4);
  taps.weight.resize(static_cast<std::size_t>(out_size) * 4);
  for (int o = 0; o < out_size; ++o) {
    const double x = lr_coord(o, alpha);
    const int i0 = static_cast<int>(std::floor(x));
    for (int k = 0; k < 4; ++k) {
      const int tap = i0 - 1 + k;
      taps.index[4 * o + k] = std::clamp(tap, 0, in_size - 1);
      taps.weight[4 * o + k] = keys_weight(x - tap);
    }
  }
  return taps;
}

// Separable resampling: horizontal taps, then vertical taps, double
// intermediates.
Raster resample(const Raster& source, int alpha, const Taps& tx, const Taps& ty) {
  const int oh = source.height * alpha;
  const int ow = source.width * alpha;
  Raster out(source.channels, oh, ow, source.units);
  std::vector<double> rowbuf(static_cast<std::size_t>(source.height) * ow);
  for (int c = 0; c < source.channels; ++c) {
    const float* in = source.channel(c);
    for (int y = 0; y < source.height; ++y) {
      const float* row = in + static_cast<std::size_t>(y) * source.width;
      double* drow = rowbuf.data() + static_cast<std::size_t>(y) * ow;
      for (int x = 0; x < ow; ++x) {
        double acc = 0.0;
        for (int k = 0; k < tx.per_sample; ++k) {
          acc += tx.weight[tx.per_sample * x + k] * row[tx.index[tx.per_sample * x + k]];
        }
        drow[x] = acc;
      }
    }
    float* dst = out.channel(c);
    for (int y = 0; y < oh; ++y) {
      float* orow = dst + static_cast<std::size_t>(y) * ow;
      for (int x = 0; x < ow; ++x) {
        double acc = 0.0;
        for (int k = 0; k < ty.per_sample; ++k) {
          acc += ty.weight[ty.per_sample * y + k] * rowbuf[static_cast<std::size_t>(ty.index[ty.per_sample * y + k]) * ow + x];
        }
        orow[x] = static_cast<float>(acc);
      }
    }
  }
  return out;
}

}  // namespace

double keys_weight(double t) {
  t = std::abs(t);
  if (t <= 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

Raster upsample_nearest(const Raster& source, int alpha) {
  check_alpha(alpha);
  const int oh = source.height * alpha;
  const int ow = source.width * alpha;
  Raster out(source.channels, oh, ow, source.units);
  for (int c = 0; c < source.channels; ++c) {
    const float* in = source.channel(c);
    float* dst = out.channel(c);
    for (int y = 0; y < oh; ++y) {
      const float* srow = in + static_cast<std::size_t>(y / alpha) * source.width;
      float* orow = dst + static_cast<std::size_t>(y) * ow;
      for (int x = 0; x < ow; ++x) orow[x] = srow[x / alpha];
    }
  }
  return out;
}

Raster upsample_bilinear(const Raster& source, int alpha) {
  check_alpha(alpha);
  const Taps tx = linear_taps(source.width * alpha, source.width, alpha);
  const Taps ty = linear_taps(source.height * alpha, source.height, alpha);
  return resample(source, alpha, tx, ty);
}

Raster upsample_bicubic(const Raster& source, int alpha) {
  check_alpha(alpha);
  if (source.height < 2 || source.width < 2) {
    throw dimension_error("upsample_bicubic: source must be at least 2x2, got " + std::to_string(source.height) +
                          "x" + std::to_string(source.width));
  }
  const Taps tx = cubic_taps(source.width * alpha, source.width, alpha);
  const Taps ty = cubic_taps(source.height * alpha, source.height, alpha);
  return resample(source, alpha, tx, ty);
}

}  // namespace gsr
