#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "gsr/errors.hpp"
#include "gsr/interp.hpp"
#include "gsr/metrics.hpp"
#include "gsr/rng.hpp"
#include "gsr/synth.hpp"
#include "test_util.hpp"

using namespace gsr;
using namespace gsr::test;

TEST_CASE("nearest replicates blocks") {
  const Raster src = make_raster(1, 2, 2, {1, 2, 3, 4});
  const Raster up = upsample_nearest(src, 2);
  REQUIRE(up.height == 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      CHECK(up.at(0, y, x) == src.at(0, y / 2, x / 2));
    }
  }
  CHECK(upsample_nearest(src, 1) == src);

  // Pooling nearest output recovers the source exactly.
  const Raster pooled = downsample_avg(up, 2);
  CHECK(pooled.values == src.values);
}

TEST_CASE("bilinear matches the hand-evaluated coordinate mapping") {
  // x_lr = (x_hr + 0.5)/2 - 0.5 with edge clamping over [0, 1].
  const Raster src = make_raster(1, 1, 2, {0.0f, 1.0f});
  const Raster up = upsample_bilinear(src, 2);
  REQUIRE(up.width == 4);
  CHECK(up.at(0, 0, 0) == doctest::Approx(0.0));
  CHECK(up.at(0, 0, 1) == doctest::Approx(0.25));
  CHECK(up.at(0, 0, 2) == doctest::Approx(0.75));
  CHECK(up.at(0, 0, 3) == doctest::Approx(1.0));
}

TEST_CASE("bilinear reproduces constants and ramps") {
  const Raster c = constant_raster(1, 3, 5, 7.25f);
  const Raster up = upsample_bilinear(c, 4);
  for (const float v : up.values) CHECK(approx_rel(v, 7.25, 1e-6));

  // Linear ramp along x: output matches the ramp at LR pixel centers and
  // is piecewise linear between them.
  Raster ramp(1, 1, 6);
  for (int x = 0; x < 6; ++x) ramp.at(0, 0, x) = static_cast<float>(x);
  const Raster r2 = upsample_bilinear(ramp, 2);
  for (int x = 0; x < 12; ++x) {
    const double x_lr = (x + 0.5) / 2.0 - 0.5;
    const double expected = std::clamp(x_lr, 0.0, 5.0);
    CHECK(r2.at(0, 0, x) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("bicubic impulse response is the Keys tensor product") {
  // Impulse at LR (1, 1) in a zero 4x4 source, alpha=2: every HR value is
  // the product of 1-D Keys kernel weights at the offsets of the mapping.
  Raster src(1, 4, 4);
  src.at(0, 1, 1) = 1.0f;
  const Raster up = upsample_bicubic(src, 2);
  for (int y = 0; y < 8; ++y) {
    const double ty = (y + 0.5) / 2.0 - 0.5 - 1.0;  // offset from the impulse row
    for (int x = 0; x < 8; ++x) {
      const double tx = (x + 0.5) / 2.0 - 0.5 - 1.0;
      if (std::abs(ty) >= 2.0 || std::abs(tx) >= 2.0) continue;  // clamping reuses edge taps outside
      if (y < 1 || y > 6 || x < 1 || x > 6) continue;
      CHECK(up.at(0, y, x) == doctest::Approx(keys_weight(ty) * keys_weight(tx)).epsilon(1e-6));
    }
  }
}

TEST_CASE("keys kernel values") {
  CHECK(keys_weight(0.0) == doctest::Approx(1.0));
  CHECK(keys_weight(1.0) == doctest::Approx(0.0));
  CHECK(keys_weight(0.25) == doctest::Approx(1.5 * 0.015625 - 2.5 * 0.0625 + 1.0));
  CHECK(keys_weight(1.25) == doctest::Approx(-0.5 * (1.953125 - 5 * 1.5625 + 8 * 1.25 - 4)));
  CHECK(keys_weight(2.0) == doctest::Approx(0.0));
  // Partition of unity at the sampled offsets.
  for (double t : {0.125, 0.25, 0.375, 0.5, 0.75}) {
    const double sum = keys_weight(t + 1.0) + keys_weight(t) + keys_weight(1.0 - t) + keys_weight(2.0 - t);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("bicubic preserves constants and linear ramps") {
  const Raster c = constant_raster(1, 4, 4, -3.5f);
  for (const float v : upsample_bicubic(c, 3).values) CHECK(approx_rel(v, -3.5, 1e-6));

  Raster ramp(1, 6, 6);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) ramp.at(0, y, x) = static_cast<float>(2 * x - y);
  }
  const Raster up = upsample_bicubic(ramp, 2);
  // Degree-1 reproduction holds where the 4-tap stencil never clamps:
  // x_lr in [1, 4), i.e. HR indices 3..8.
  for (int y = 3; y <= 8; ++y) {
    for (int x = 3; x <= 8; ++x) {
      const double fx = (x + 0.5) / 2.0 - 0.5;
      const double fy = (y + 0.5) / 2.0 - 0.5;
      CHECK(up.at(0, y, x) == doctest::Approx(2 * fx - fy).epsilon(1e-6));
    }
  }

  CHECK_THROWS_AS(upsample_bicubic(make_raster(1, 1, 3, {1, 2, 3}), 2), dimension_error);
}

TEST_CASE("nearest and bilinear stay inside the source range, bicubic overshoot is bounded") {
  Xoshiro256ss rng(314);
  for (int trial = 0; trial < 5; ++trial) {
    Raster src(1, 8, 8);
    for (auto& v : src.values) v = static_cast<float>(rng.uniform(0.0, 10.0));
    float lo = src.values[0], hi = src.values[0];
    for (const float v : src.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (const int alpha : {2, 3, 4}) {
      for (const float v : upsample_nearest(src, alpha).values) {
        CHECK(v >= lo);
        CHECK(v <= hi);
      }
      for (const float v : upsample_bilinear(src, alpha).values) {
        CHECK(v >= lo - 1e-5f);
        CHECK(v <= hi + 1e-5f);
      }
      // Bicubic may overshoot, but no more than 25% of the dynamic range
      // on random fields.
      const float margin = 0.25f * (hi - lo);
      for (const float v : upsample_bicubic(src, alpha).values) {
        CHECK(v >= lo - margin);
        CHECK(v <= hi + margin);
      }
    }
  }
}

TEST_CASE("psnr ordering bicubic >= bilinear >= nearest on smooth fields") {
  SynthParams p;
  p.height = 64;
  p.width = 64;
  p.alpha = 4;
  p.guide_channels = 1;
  p.smooth_scale = 10;
  p.texture_gain = 0.0;
  std::vector<double> d_nearest, d_bilinear, d_bicubic;
  for (int seed = 0; seed < 20; ++seed) {
    p.seed = 500 + static_cast<std::uint64_t>(seed);
    const PatchRecord record = gen_sample(p);
    d_nearest.push_back(psnr(upsample_nearest(record.source, p.alpha), record.target, 100.0));
    d_bilinear.push_back(psnr(upsample_bilinear(record.source, p.alpha), record.target, 100.0));
    d_bicubic.push_back(psnr(upsample_bicubic(record.source, p.alpha), record.target, 100.0));
  }
  const double m_nearest = median_of(d_nearest);
  const double m_bilinear = median_of(d_bilinear);
  const double m_bicubic = median_of(d_bicubic);
  CHECK(m_bicubic >= m_bilinear);
  CHECK(m_bilinear >= m_nearest);
}
