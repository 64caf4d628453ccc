#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <set>

#include "doctest.h"
#include "gsr/interp.hpp"
#include "gsr/metrics.hpp"
#include "gsr/synth.hpp"
#include "test_util.hpp"

using namespace gsr;
using namespace gsr::test;

namespace {

SynthParams base_params() {
  SynthParams p;
  p.seed = 42;
  p.height = 32;
  p.width = 32;
  p.alpha = 4;
  p.guide_channels = 3;
  p.smooth_scale = 5;
  p.texture_gain = 6.0;
  p.noise_sigma = {0.4};
  return p;
}

}  // namespace

TEST_CASE("gen_sample is deterministic in the seed") {
  const SynthParams p = base_params();
  const PatchRecord a = gen_sample(p);
  const PatchRecord b = gen_sample(p);
  CHECK(a == b);

  SynthParams other = p;
  other.seed += 1;
  CHECK(gen_sample(other).target.values != a.target.values);
}

TEST_CASE("degenerate mixing reproduces the target in guide channel 0") {
  SynthParams p = base_params();
  p.noise_sigma = {0.0};
  p.mix_target = {1.0};
  p.mix_independent = {0.0};
  const PatchRecord record = gen_sample(p);
  const float* guide0 = record.guide.channel(0);
  for (std::size_t i = 0; i < record.target.values.size(); ++i) {
    CHECK(guide0[i] == record.target.values[i]);
  }
}

TEST_CASE("source equals the pooled target bit-exactly") {
  const PatchRecord record = gen_sample(base_params());
  const Raster pooled = downsample_avg(record.target, record.alpha);
  CHECK(record.source.values == pooled.values);
}

TEST_CASE("target stays inside value_range") {
  SynthParams p = base_params();
  p.value_range = {10.0, 20.0};
  p.texture_gain = 50.0;  // force clipping
  const PatchRecord record = gen_sample(p);
  for (const float v : record.target.values) {
    CHECK(v >= 10.0f);
    CHECK(v <= 20.0f);
  }
}

TEST_CASE("smooth targets favor bicubic over nearest") {
  SynthParams p = base_params();
  p.texture_gain = 0.0;
  p.smooth_scale = 8;
  int bicubic_wins = 0;
  for (int seed = 0; seed < 20; ++seed) {
    p.seed = 1000 + static_cast<std::uint64_t>(seed);
    const PatchRecord record = gen_sample(p);
    const double psnr_bicubic = psnr(upsample_bicubic(record.source, p.alpha), record.target, 100.0);
    const double psnr_nearest = psnr(upsample_nearest(record.source, p.alpha), record.target, 100.0);
    if (psnr_bicubic >= psnr_nearest) ++bicubic_wins;
  }
  CHECK(bicubic_wins == 20);
}

TEST_CASE("gen_dataset naming and count") {
  const SynthParams p = base_params();
  CHECK(gen_dataset(p, 0).empty());
  const auto records = gen_dataset(p, 3);
  REQUIRE(records.size() == 3);
  CHECK(records[0].id == "synth-0000");
  CHECK(records[1].id == "synth-0001");
  CHECK(records[2].id == "synth-0002");
  CHECK(records[0].target.values != records[1].target.values);
}

TEST_CASE("value histograms vary across seeds") {
  SynthParams p = base_params();
  std::set<std::array<int, 16>> histograms;
  for (int s = 0; s < 20; ++s) {
    p.seed = 77 + static_cast<std::uint64_t>(s);
    const PatchRecord record = gen_sample(p);
    std::array<int, 16> hist{};
    for (const float v : record.target.values) {
      int bin = static_cast<int>((v - 0.0f) / 100.0f * 16.0f);
      bin = std::clamp(bin, 0, 15);
      ++hist[static_cast<std::size_t>(bin)];
    }
    histograms.insert(hist);
  }
  CHECK(histograms.size() == 20);
}

TEST_CASE("params validation") {
  SynthParams p = base_params();
  p.height = 30;  // not divisible by alpha=4
  CHECK_THROWS(gen_sample(p));
  p = base_params();
  p.value_range = {5.0, 5.0};
  CHECK_THROWS_AS(gen_sample(p), std::invalid_argument);
  p = base_params();
  p.noise_sigma = {0.1, 0.1};  // neither 1 nor guide_channels entries
  CHECK_THROWS_AS(gen_sample(p), std::invalid_argument);
}
