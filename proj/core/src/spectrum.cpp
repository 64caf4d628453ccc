#include "gsr/spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gsr/errors.hpp"
#include "gsr/rng.hpp"

namespace gsr {
namespace {

bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

// In-place radix-2 decimation-in-time transform of `data[offset + i*stride]`,
// forward sign convention exp(-2*pi*i*k/n).
void fft_1d(std::complex<double>* data, int n, int stride) {
  // Bit-reversal permutation.
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[static_cast<std::size_t>(i) * stride], data[static_cast<std::size_t>(j) * stride]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double angle = -kTwoPi / len;
    const std::complex<double> root(std::cos(angle), std::sin(angle));
    for (int start = 0; start < n; start += len) {
      std::complex<double> w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        auto& a = data[static_cast<std::size_t>(start + k) * stride];
        auto& b = data[static_cast<std::size_t>(start + k + len / 2) * stride];
        const std::complex<double> t = w * b;
        b = a - t;
        a += t;
        w *= root;
      }
    }
  }
}

}  // namespace

std::vector<std::complex<double>> fft2d(const Raster& map) {
  if (map.channels != 1) throw dimension_error("fft2d: single-channel rasters only");
  if (!is_pow2(map.height) || !is_pow2(map.width)) {
    throw dimension_error("fft2d: dimensions must be powers of two, got " + std::to_string(map.height) + "x" +
                          std::to_string(map.width));
  }
  const int h = map.height, w = map.width;
  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(h) * w);
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] = map.values[i];
  for (int y = 0; y < h; ++y) fft_1d(spectrum.data() + static_cast<std::size_t>(y) * w, w, 1);
  for (int x = 0; x < w; ++x) fft_1d(spectrum.data() + x, h, w);
  return spectrum;
}

RadialSpectrum radial_profile(const std::vector<std::complex<double>>& spectrum, int height, int width) {
  if (spectrum.size() != static_cast<std::size_t>(height) * width || height < 1 || width < 1) {
    throw std::invalid_argument("radial_profile: spectrum size does not match dimensions");
  }
  const int max_radius = std::min(height, width) / 2;
  RadialSpectrum profile;
  profile.mean_magnitude.assign(static_cast<std::size_t>(max_radius) + 1, 0.0);
  profile.count.assign(static_cast<std::size_t>(max_radius) + 1, 0);
  for (int u = 0; u < height; ++u) {
    const int su = u < (height + 1) / 2 ? u : u - height;
    for (int v = 0; v < width; ++v) {
      const int sv = v < (width + 1) / 2 ? v : v - width;
      const long long bin = std::llround(std::hypot(static_cast<double>(su), static_cast<double>(sv)));
      if (bin > max_radius) continue;
      profile.mean_magnitude[static_cast<std::size_t>(bin)] +=
          std::abs(spectrum[static_cast<std::size_t>(u) * width + v]);
      ++profile.count[static_cast<std::size_t>(bin)];
    }
  }
  for (std::size_t b = 0; b < profile.mean_magnitude.size(); ++b) {
    if (profile.count[b] > 0) profile.mean_magnitude[b] /= static_cast<double>(profile.count[b]);
  }
  return profile;
}

RadialSpectrum aggregate_profiles(const std::vector<RadialSpectrum>& profiles) {
  if (profiles.empty()) throw std::invalid_argument("aggregate_profiles: at least one profile required");
  const std::size_t bins = profiles.front().mean_magnitude.size();
  for (const auto& p : profiles) {
    if (p.mean_magnitude.size() != bins || p.count != profiles.front().count) {
      throw std::invalid_argument("aggregate_profiles: profiles have mixed radius axes");
    }
  }
  RadialSpectrum out;
  out.count = profiles.front().count;
  out.mean_magnitude.assign(bins, 0.0);
  out.std_dev.assign(bins, 0.0);
  const double n = static_cast<double>(profiles.size());
  for (std::size_t b = 0; b < bins; ++b) {
    double mean = 0.0;
    for (const auto& p : profiles) mean += p.mean_magnitude[b];
    mean /= n;
    double var = 0.0;
    for (const auto& p : profiles) {
      const double d = p.mean_magnitude[b] - mean;
      var += d * d;
    }
    out.mean_magnitude[b] = mean;
    out.std_dev[b] = std::sqrt(var / n);
  }
  return out;
}

}  // namespace gsr
