#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "gsr/bundle.hpp"
#include "gsr/errors.hpp"
#include "gsr/raster.hpp"
#include "gsr/rng.hpp"
#include "gsr/split.hpp"
#include "gsr/synth.hpp"
#include "test_util.hpp"

using namespace gsr;
using namespace gsr::test;
namespace fs = std::filesystem;

TEST_CASE("raster invariants") {
  CHECK_THROWS_AS(Raster(1, 2, 2, std::vector<float>{1.0f, 2.0f, 3.0f}), dimension_error);
  CHECK_THROWS_AS(Raster(1, 1, 2, std::vector<float>{1.0f, NAN}), std::invalid_argument);
  CHECK_THROWS_AS(Raster(0, 4, 4), dimension_error);
  const Raster r(2, 3, 4, "t/px");
  CHECK(r.size() == 24);
  CHECK(r.units == "t/px");
}

TEST_CASE("downsample_avg block means") {
  const Raster m = make_raster(1, 2, 2, {1, 2, 3, 4});
  const Raster d = downsample_avg(m, 2);
  CHECK(d.height == 1);
  CHECK(d.width == 1);
  CHECK(d.values[0] == doctest::Approx(2.5));
}

TEST_CASE("downsample_avg constants and identity") {
  const Raster c = constant_raster(1, 8, 12, 3.75f);
  const Raster d = downsample_avg(c, 4);
  for (const float v : d.values) CHECK(v == doctest::Approx(3.75f));
  const Raster same = downsample_avg(c, 1);
  CHECK(same == c);
}

TEST_CASE("downsample_avg rejects non-divisible dims") {
  const Raster m = constant_raster(1, 6, 6, 1.0f);
  CHECK_THROWS_WITH_AS(downsample_avg(m, 4), doctest::Contains("alpha=4"), dimension_error);
}

TEST_CASE("downsample_avg conserves mass and composes") {
  Xoshiro256ss rng(99);
  Raster m(1, 24, 24);
  for (auto& v : m.values) v = static_cast<float>(rng.uniform(-5.0, 5.0));

  auto mean_of = [](const Raster& r) {
    double acc = 0.0;
    for (const float v : r.values) acc += v;
    return acc / static_cast<double>(r.values.size());
  };
  const Raster d = downsample_avg(m, 3);
  CHECK(approx_rel(mean_of(d), mean_of(m), 1e-6));

  const Raster once = downsample_avg(m, 6);
  const Raster twice = downsample_avg(downsample_avg(m, 2), 3);
  REQUIRE(once.values.size() == twice.values.size());
  for (std::size_t i = 0; i < once.values.size(); ++i) {
    CHECK(approx_rel(once.values[i], twice.values[i], 1e-6));
  }
}

TEST_CASE("coord_grid pixel centers") {
  const CoordGrid g = coord_grid(2, 2);
  CHECK(g.col_coord(0, 0) == doctest::Approx(0.25));
  CHECK(g.col_coord(0, 1) == doctest::Approx(0.75));

  const CoordGrid point = coord_grid(1, 1);
  CHECK(point.row_coord(0, 0) == doctest::Approx(0.5));
  CHECK(point.col_coord(0, 0) == doctest::Approx(0.5));

  const CoordGrid tall = coord_grid(4, 1);
  CHECK(tall.row_coord(0, 0) == doctest::Approx(0.125));
  CHECK(tall.row_coord(1, 0) == doctest::Approx(0.375));
  CHECK(tall.row_coord(2, 0) == doctest::Approx(0.625));
  CHECK(tall.row_coord(3, 0) == doctest::Approx(0.875));

  CHECK_THROWS_AS(coord_grid(0, 3), std::invalid_argument);
}

namespace {

std::vector<std::string> numbered_ids(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("id-" + std::to_string(100000 + i));
  return ids;
}

}  // namespace

TEST_CASE("split sizes follow floor arithmetic") {
  const auto split = split_dataset(numbered_ids(10), {0.6, 0.2, 0.2}, 7);
  CHECK(split.train_ids.size() == 6);
  CHECK(split.val_ids.size() == 2);
  CHECK(split.test_ids.size() == 2);

  // 8689 training samples out of 8689/0.6 keeps the documented 60/20/20
  // counts: floor(8689*0.6)=5213, floor(8689*0.8)=6951.
  const auto big = split_dataset(numbered_ids(8689), {0.6, 0.2, 0.2}, 1);
  CHECK(big.train_ids.size() == 5213);
  CHECK(big.val_ids.size() == 1738);
  CHECK(big.test_ids.size() == 1738);
}

TEST_CASE("split partitions and is deterministic") {
  auto ids = numbered_ids(37);
  const auto a = split_dataset(ids, {0.5, 0.25, 0.25}, 123);
  const auto b = split_dataset(ids, {0.5, 0.25, 0.25}, 123);
  CHECK(a.train_ids == b.train_ids);
  CHECK(a.val_ids == b.val_ids);
  CHECK(a.test_ids == b.test_ids);

  // Input order must not matter.
  std::reverse(ids.begin(), ids.end());
  const auto c = split_dataset(ids, {0.5, 0.25, 0.25}, 123);
  CHECK(a.train_ids == c.train_ids);
  CHECK(a.test_ids == c.test_ids);

  std::set<std::string> all;
  for (const auto& id : a.train_ids) all.insert(id);
  for (const auto& id : a.val_ids) all.insert(id);
  for (const auto& id : a.test_ids) all.insert(id);
  CHECK(all.size() == 37);

  const auto other_seed = split_dataset(ids, {0.5, 0.25, 0.25}, 124);
  CHECK(a.train_ids != other_seed.train_ids);
}

TEST_CASE("split rejects bad input") {
  auto ids = numbered_ids(5);
  ids.push_back(ids.front());
  CHECK_THROWS_AS(split_dataset(ids, {0.6, 0.2, 0.2}, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_dataset(numbered_ids(5), {0.7, 0.2, 0.2}, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_dataset(numbered_ids(5), {0.8, 0.3, -0.1}, 1), std::invalid_argument);
}

namespace {

PatchRecord sample_record() {
  SynthParams params;
  params.seed = 5;
  params.height = 16;
  params.width = 16;
  params.alpha = 4;
  params.guide_channels = 3;
  params.smooth_scale = 3;
  params.texture_gain = 5.0;
  params.noise_sigma = {0.2};
  return gen_sample(params);
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("bundle round-trip is exact") {
  TempDir tmp("gsr_bundle_roundtrip");
  const PatchRecord record = sample_record();
  write_bundle(record, tmp.path / record.id);
  const PatchRecord loaded = read_bundle(tmp.path / record.id);
  CHECK(loaded == record);
  CHECK(list_bundle_ids(tmp.path) == std::vector<std::string>{record.id});
}

TEST_CASE("bundle read reports truncation with the file name") {
  TempDir tmp("gsr_bundle_truncated");
  const PatchRecord record = sample_record();
  write_bundle(record, tmp.path / record.id);
  fs::resize_file(tmp.path / record.id / "guide.bin", 100);
  CHECK_THROWS_WITH_AS(read_bundle(tmp.path / record.id), doctest::Contains("guide.bin"), format_error);
}

TEST_CASE("bundle read rejects missing payloads and bad alpha") {
  TempDir tmp("gsr_bundle_badmeta");
  const PatchRecord record = sample_record();
  write_bundle(record, tmp.path / record.id);
  fs::remove(tmp.path / record.id / "source.bin");
  CHECK_THROWS_WITH_AS(read_bundle(tmp.path / record.id), doctest::Contains("source.bin"), format_error);

  CHECK_THROWS_AS(read_bundle(tmp.path / "nope"), format_error);

  // alpha=3 cannot divide 16.
  std::ofstream meta(tmp.path / record.id / "meta.json", std::ios::trunc);
  meta << R"({"id":"x","alpha":3,"H":16,"W":16,"guide_channels":3,)"
       << R"("dtype":"f32","byte_order":"little","layout":"CHW planar"})";
  meta.close();
  CHECK_THROWS_AS(read_bundle(tmp.path / record.id), dimension_error);
}

TEST_CASE("bundle read rejects non-finite payloads") {
  TempDir tmp("gsr_bundle_nonfinite");
  const PatchRecord record = sample_record();
  write_bundle(record, tmp.path / record.id);
  {
    std::fstream f(tmp.path / record.id / "target.bin", std::ios::binary | std::ios::in | std::ios::out);
    const float bad = INFINITY;
    f.write(reinterpret_cast<const char*>(&bad), sizeof(bad));
  }
  CHECK_THROWS_WITH_AS(read_bundle(tmp.path / record.id), doctest::Contains("target.bin"), format_error);
}
