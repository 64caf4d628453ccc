#include "gsr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "gsr/raster.hpp"
#include "gsr/rng.hpp"

namespace gsr {
namespace {

// Seed stream tags.
constexpr std::uint64_t kBaseStream = 1;
constexpr std::uint64_t kTextureStream = 2;
constexpr std::uint64_t kCoefStream = 3;
constexpr std::uint64_t kChannelStream = 16;
constexpr std::uint64_t kNoiseStream = 512;

void binomial_pass_rows(std::vector<double>& field, std::vector<double>& tmp, int height, int width) {
  for (int y = 0; y < height; ++y) {
    const double* row = field.data() + static_cast<std::size_t>(y) * width;
    double* out = tmp.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      const double left = row[x > 0 ? x - 1 : 0];
      const double right = row[x + 1 < width ? x + 1 : width - 1];
      out[x] = 0.25 * left + 0.5 * row[x] + 0.25 * right;
    }
  }
  field.swap(tmp);
}

void binomial_pass_cols(std::vector<double>& field, std::vector<double>& tmp, int height, int width) {
  for (int y = 0; y < height; ++y) {
    const double* up = field.data() + static_cast<std::size_t>(y > 0 ? y - 1 : 0) * width;
    const double* mid = field.data() + static_cast<std::size_t>(y) * width;
    const double* down = field.data() + static_cast<std::size_t>(y + 1 < height ? y + 1 : height - 1) * width;
    double* out = tmp.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) out[x] = 0.25 * up[x] + 0.5 * mid[x] + 0.25 * down[x];
  }
  field.swap(tmp);
}

void normalize_unit(std::vector<double>& field) {
  double sum = 0.0;
  for (const double v : field) sum += v;
  const double mean = sum / static_cast<double>(field.size());
  double var = 0.0;
  for (const double v : field) var += (v - mean) * (v - mean);
  const double stddev = std::sqrt(var / static_cast<double>(field.size()));
  if (stddev < 1e-12) {
    std::fill(field.begin(), field.end(), 0.0);
    return;
  }
  for (double& v : field) v = (v - mean) / stddev;
}

std::vector<double> expand(const std::vector<double>& values, int channels, const char* name) {
  if (values.empty()) return {};
  if (values.size() == 1) return std::vector<double>(channels, values[0]);
  if (values.size() != static_cast<std::size_t>(channels)) {
    throw std::invalid_argument(std::string("SynthParams: ") + name + " must have 1 or guide_channels entries");
  }
  return values;
}

std::string sample_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth-%04d", index);
  return buf;
}

}  // namespace

void SynthParams::validate() const {
  if (height <= 0 || width <= 0) throw std::invalid_argument("SynthParams: dimensions must be positive");
  if (alpha < 1) throw std::invalid_argument("SynthParams: alpha must be >= 1");
  if (height % alpha != 0 || width % alpha != 0) {
    throw dimension_error("SynthParams: alpha=" + std::to_string(alpha) + " does not divide H=" +
                          std::to_string(height) + ", W=" + std::to_string(width));
  }
  if (guide_channels < 1) throw std::invalid_argument("SynthParams: guide_channels must be >= 1");
  if (smooth_scale < 0) throw std::invalid_argument("SynthParams: smooth_scale must be >= 0");
  if (texture_gain < 0.0) throw std::invalid_argument("SynthParams: texture_gain must be >= 0");
  for (const double s : noise_sigma) {
    if (s < 0.0) throw std::invalid_argument("SynthParams: noise sigmas must be non-negative");
  }
  if (!(value_range.first < value_range.second)) {
    throw std::invalid_argument("SynthParams: value_range min must be < max");
  }
  if (sample_index < 0) throw std::invalid_argument("SynthParams: sample_index must be >= 0");
}

std::vector<double> smooth_unit_field(int height, int width, int radius, std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  std::vector<double> field(static_cast<std::size_t>(height) * width);
  for (double& v : field) v = rng.gaussian();
  std::vector<double> tmp(field.size());
  for (int pass = 0; pass < radius; ++pass) {
    binomial_pass_rows(field, tmp, height, width);
    binomial_pass_cols(field, tmp, height, width);
  }
  normalize_unit(field);
  return field;
}

PatchRecord gen_sample(const SynthParams& params) {
  params.validate();
  const int h = params.height;
  const int w = params.width;
  const std::size_t n = static_cast<std::size_t>(h) * w;
  const double lo = params.value_range.first;
  const double hi = params.value_range.second;
  const double mid = 0.5 * (lo + hi);
  const double base_amp = 0.25 * (hi - lo);

  const auto base = smooth_unit_field(h, w, params.smooth_scale, derive_seed(params.seed, kBaseStream));

  // Detail field: a +-1 blob pattern at just-sub-cell scale, the sharp
  // structure a guided upsampler can recover from the guide but a blind
  // interpolator cannot.
  std::vector<double> texture;
  if (params.texture_gain > 0.0) {
    texture = smooth_unit_field(h, w, std::max(1, params.alpha), derive_seed(params.seed, kTextureStream));
    for (double& v : texture) v = v >= 0.0 ? 1.0 : -1.0;
  }

  Raster target(1, h, w, "t/px");
  for (std::size_t i = 0; i < n; ++i) {
    double v = mid + base_amp * base[i];
    if (!texture.empty()) v += params.texture_gain * texture[i];
    target.values[i] = static_cast<float>(std::clamp(v, lo, hi));
  }

  const int channels = params.guide_channels;
  const auto sigma = expand(params.noise_sigma, channels, "noise_sigma");
  auto mix_a = expand(params.mix_target, channels, "mix_target");
  auto mix_b = expand(params.mix_independent, channels, "mix_independent");
  const bool draw_a = mix_a.empty();
  const bool draw_b = mix_b.empty();
  if (draw_a) mix_a.resize(channels);
  if (draw_b) mix_b.resize(channels);
  Xoshiro256ss coef_rng(derive_seed(params.seed, kCoefStream));
  for (int k = 0; k < channels; ++k) {
    const double a = coef_rng.uniform(0.3, 1.0);
    const double b = coef_rng.uniform(0.3, 1.0);
    if (draw_a) mix_a[k] = a;
    if (draw_b) mix_b[k] = b;
  }

  Raster guide(channels, h, w);
  for (int k = 0; k < channels; ++k) {
    const auto indep =
        smooth_unit_field(h, w, params.smooth_scale, derive_seed(params.seed, kChannelStream + static_cast<std::uint64_t>(k)));
    const double noise_level = sigma.empty() ? 0.0 : sigma[k];
    Xoshiro256ss noise_rng(derive_seed(params.seed, kNoiseStream + static_cast<std::uint64_t>(k)));
    float* out = guide.channel(k);
    for (std::size_t i = 0; i < n; ++i) {
      double v = mix_a[k] * static_cast<double>(target.values[i]) + mix_b[k] * (base_amp * indep[i]);
      if (noise_level > 0.0) v += noise_level * noise_rng.gaussian();
      out[i] = static_cast<float>(v);
    }
  }

  PatchRecord record;
  record.id = sample_id(params.sample_index);
  record.guide = std::move(guide);
  record.target = std::move(target);
  record.source = downsample_avg(record.target, params.alpha);
  record.alpha = params.alpha;
  record.validate();
  return record;
}

std::vector<PatchRecord> gen_dataset(const SynthParams& params, int count) {
  if (count < 0) throw std::invalid_argument("gen_dataset: count must be >= 0");
  std::vector<PatchRecord> records;
  records.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SynthParams sample = params;
    sample.seed = params.seed + static_cast<std::uint64_t>(i);
    sample.sample_index = i;
    records.push_back(gen_sample(sample));
  }
  return records;
}

}  // namespace gsr
