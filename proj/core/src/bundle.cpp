#include "gsr/bundle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "gsr/errors.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gsr {
namespace {

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

void write_floats(const fs::path& file, const std::vector<float>& values) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw format_error("cannot open " + file.string() + " for writing");
  std::vector<std::uint32_t> bits(values.size());
  std::memcpy(bits.data(), values.data(), values.size() * sizeof(float));
  for (auto& b : bits) b = to_little(b);
  out.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size() * 4));
  if (!out) throw format_error("short write to " + file.string());
}

std::vector<float> read_floats(const fs::path& file, std::size_t expected_count) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw format_error("missing payload " + file.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::uint64_t>(in.tellg());
  if (bytes != expected_count * 4) {
    throw format_error(file.string() + ": expected " + std::to_string(expected_count * 4) + " bytes, found " +
                       std::to_string(bytes));
  }
  in.seekg(0);
  std::vector<std::uint32_t> bits(expected_count);
  in.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw format_error("short read from " + file.string());
  for (auto& b : bits) b = to_little(b);
  std::vector<float> values(expected_count);
  std::memcpy(values.data(), bits.data(), expected_count * sizeof(float));
  for (const float v : values) {
    if (!std::isfinite(v)) throw format_error(file.string() + ": payload contains non-finite values");
  }
  return values;
}

json read_meta(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  std::ifstream in(meta_path);
  if (!in) throw format_error("missing meta.json in " + dir.string());
  json meta;
  try {
    in >> meta;
  } catch (const json::exception& e) {
    throw format_error(meta_path.string() + ": " + e.what());
  }
  return meta;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw format_error("cannot open " + file.string() + " for writing");
  out << text;
  if (!out) throw format_error("short write to " + file.string());
}

}  // namespace

void write_bundle(const PatchRecord& record, const fs::path& dir) {
  record.validate();
  fs::create_directories(dir);

  json meta;
  meta["id"] = record.id;
  meta["alpha"] = record.alpha;
  meta["H"] = record.target.height;
  meta["W"] = record.target.width;
  meta["guide_channels"] = record.guide.channels;
  meta["dtype"] = "f32";
  meta["byte_order"] = "little";
  meta["layout"] = "CHW planar";
  meta["units"] = {{"guide", record.guide.units}, {"target", record.target.units}, {"source", record.source.units}};
  write_text(dir / "meta.json", meta.dump(2) + "\n");

  write_floats(dir / "guide.bin", record.guide.values);
  write_floats(dir / "target.bin", record.target.values);
  write_floats(dir / "source.bin", record.source.values);
}

PatchRecord read_bundle(const fs::path& dir) {
  const json meta = read_meta(dir);
  PatchRecord record;
  int height = 0, width = 0, guide_channels = 0;
  try {
    record.id = meta.at("id").get<std::string>();
    record.alpha = meta.at("alpha").get<int>();
    height = meta.at("H").get<int>();
    width = meta.at("W").get<int>();
    guide_channels = meta.at("guide_channels").get<int>();
  } catch (const json::exception& e) {
    throw format_error((dir / "meta.json").string() + ": " + e.what());
  }
  if (record.alpha < 1 || height <= 0 || width <= 0 || guide_channels <= 0) {
    throw format_error((dir / "meta.json").string() + ": non-positive dimensions");
  }
  if (height % record.alpha != 0 || width % record.alpha != 0) {
    throw dimension_error((dir / "meta.json").string() + ": alpha=" + std::to_string(record.alpha) +
                          " does not divide H=" + std::to_string(height) + ", W=" + std::to_string(width));
  }
  std::string guide_units, target_units, source_units;
  if (meta.contains("units")) {
    const auto& units = meta["units"];
    guide_units = units.value("guide", "");
    target_units = units.value("target", "");
    source_units = units.value("source", "");
  }

  const auto hw = static_cast<std::size_t>(height) * width;
  record.guide = Raster(guide_channels, height, width, read_floats(dir / "guide.bin", guide_channels * hw),
                        guide_units);
  record.target = Raster(1, height, width, read_floats(dir / "target.bin", hw), target_units);
  const int sh = height / record.alpha;
  const int sw = width / record.alpha;
  record.source = Raster(1, sh, sw, read_floats(dir / "source.bin", static_cast<std::size_t>(sh) * sw),
                         source_units);
  record.validate();
  return record;
}

void write_raster_bundle(const Raster& raster, const std::string& id, const fs::path& dir) {
  raster.validate();
  fs::create_directories(dir);
  json meta;
  meta["id"] = id;
  meta["channels"] = raster.channels;
  meta["H"] = raster.height;
  meta["W"] = raster.width;
  meta["dtype"] = "f32";
  meta["byte_order"] = "little";
  meta["layout"] = "CHW planar";
  meta["units"] = raster.units;
  write_text(dir / "meta.json", meta.dump(2) + "\n");
  write_floats(dir / "values.bin", raster.values);
}

Raster read_raster_bundle(const fs::path& dir, std::string* id_out) {
  const json meta = read_meta(dir);
  int channels = 0, height = 0, width = 0;
  std::string id, units;
  try {
    id = meta.at("id").get<std::string>();
    channels = meta.at("channels").get<int>();
    height = meta.at("H").get<int>();
    width = meta.at("W").get<int>();
    units = meta.value("units", "");
  } catch (const json::exception& e) {
    throw format_error((dir / "meta.json").string() + ": " + e.what());
  }
  if (channels <= 0 || height <= 0 || width <= 0) {
    throw format_error((dir / "meta.json").string() + ": non-positive dimensions");
  }
  const auto count = static_cast<std::size_t>(channels) * height * width;
  Raster raster(channels, height, width, read_floats(dir / "values.bin", count), units);
  if (id_out) *id_out = id;
  return raster;
}

std::vector<std::string> list_bundle_ids(const fs::path& dataset_dir) {
  if (!fs::is_directory(dataset_dir)) {
    throw format_error("dataset directory " + dataset_dir.string() + " does not exist");
  }
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dataset_dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) {
      ids.push_back(entry.path().filename().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace gsr
