#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gsr/patch_record.hpp"

namespace gsr {

/// Parameters of the deterministic synthetic sample generator. Targets are
/// a clipped smooth random field plus an optional piecewise-constant
/// high-frequency detail field; every guide channel mixes the target with
/// an independent smooth field and white noise, so guides carry usable but
/// imperfect signal.
struct SynthParams {
  std::uint64_t seed = 0;
  int height = 64;
  int width = 64;
  int alpha = 8;
  int guide_channels = 15;
  /// Binomial low-pass radius of the smooth base field.
  int smooth_scale = 8;
  /// Amplitude of the high-frequency detail shared between target and
  /// guide, in target units. Zero gives a purely smooth target.
  double texture_gain = 0.0;
  /// Per-guide-channel white-noise levels; empty = all zero, a single
  /// entry broadcasts to every channel.
  std::vector<double> noise_sigma;
  std::pair<double, double> value_range{0.0, 100.0};
  /// Optional overrides for the target/independent mixing coefficients
  /// a_k, b_k; empty = drawn uniform in [0.3, 1.0] from the sample seed.
  /// A single entry broadcasts.
  std::vector<double> mix_target;
  std::vector<double> mix_independent;
  /// Names the record: ids follow "synth-%04d".
  int sample_index = 0;

  void validate() const;
};

PatchRecord gen_sample(const SynthParams& params);

/// `count` samples with per-sample seeds params.seed + i and ids
/// "synth-0000".."synth-NNNN".
std::vector<PatchRecord> gen_dataset(const SynthParams& params, int count);

/// White gaussian noise smoothed by `radius` passes of the [1,2,1]/4
/// binomial kernel per axis (replicate edges), then normalized to mean 0
/// and unit variance. Exposed for tests that build analytic records.
std::vector<double> smooth_unit_field(int height, int width, int radius, std::uint64_t seed);

}  // namespace gsr
