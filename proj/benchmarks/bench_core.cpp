// Microbenchmarks for the hot paths: resamplers, JBU, the 2-D transform
// and one P2P fit iteration. Rates are reported as output pixels per
// second via the items counter.

#include <benchmark/benchmark.h>

#include "gsr/interp.hpp"
#include "gsr/jbu.hpp"
#include "gsr/metrics.hpp"
#include "gsr/p2p.hpp"
#include "gsr/raster.hpp"
#include "gsr/spectrum.hpp"
#include "gsr/synth.hpp"

namespace {

gsr::PatchRecord make_record(int size, int alpha, int channels) {
  gsr::SynthParams params;
  params.seed = 1234;
  params.height = size;
  params.width = size;
  params.alpha = alpha;
  params.guide_channels = channels;
  params.smooth_scale = 6;
  params.texture_gain = 8.0;
  params.noise_sigma = {0.3};
  return gsr::gen_sample(params);
}

void BM_DownsampleAvg(benchmark::State& state) {
  const auto record = make_record(static_cast<int>(state.range(0)), 8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsr::downsample_avg(record.target, 8));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(record.target.pixel_count()));
}
BENCHMARK(BM_DownsampleAvg)->Arg(64)->Arg(256);

template <gsr::Raster (*Fn)(const gsr::Raster&, int)>
void BM_Upsample(benchmark::State& state) {
  const int alpha = static_cast<int>(state.range(0));
  const auto record = make_record(256, alpha, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Fn(record.source, alpha));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(record.target.pixel_count()));
}
BENCHMARK_TEMPLATE(BM_Upsample, gsr::upsample_nearest)->Arg(4)->Arg(8)->Name("BM_UpsampleNearest");
BENCHMARK_TEMPLATE(BM_Upsample, gsr::upsample_bilinear)->Arg(4)->Arg(8)->Name("BM_UpsampleBilinear");
BENCHMARK_TEMPLATE(BM_Upsample, gsr::upsample_bicubic)->Arg(4)->Arg(8)->Name("BM_UpsampleBicubic");

void BM_Jbu(benchmark::State& state) {
  const int channels = static_cast<int>(state.range(0));
  const auto record = make_record(256, 8, channels);
  const auto stats = gsr::channel_stats(record.guide);
  gsr::JbuParams params;
  params.guide_mean = stats.mean;
  params.guide_std = stats.stddev;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsr::jbu_upsample(record.source, record.guide, params, record.alpha));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(record.target.pixel_count()));
}
BENCHMARK(BM_Jbu)->Arg(1)->Arg(15);

void BM_Fft2d(benchmark::State& state) {
  const auto record = make_record(static_cast<int>(state.range(0)), 8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsr::fft2d(record.target));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(record.target.pixel_count()));
}
BENCHMARK(BM_Fft2d)->Arg(64)->Arg(256);

void BM_Ssim(benchmark::State& state) {
  const auto record = make_record(256, 8, 1);
  const auto approx = gsr::upsample_bicubic(record.source, record.alpha);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsr::ssim(approx, record.target, 100.0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(record.target.pixel_count()));
}
BENCHMARK(BM_Ssim);

void BM_P2pFitIteration(benchmark::State& state) {
  const auto record = make_record(static_cast<int>(state.range(0)), 8, 3);
  gsr::P2pConfig config;
  const int iters = 25;
  config.max_iters = iters;
  config.plateau_window = iters;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsr::p2p_fit_predict(record, config));
  }
  state.SetItemsProcessed(state.iterations() * iters * static_cast<std::int64_t>(record.target.pixel_count()));
}
BENCHMARK(BM_P2pFitIteration)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
