#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gsr/patch_record.hpp"
#include "gsr/raster.hpp"

namespace gsr {

/// On-disk patch bundle: one directory per sample holding meta.json plus
/// raw little-endian float32 payloads guide.bin / target.bin / source.bin
/// in planar channel-major layout. Round-trips records bit-exactly.
void write_bundle(const PatchRecord& record, const std::filesystem::path& dir);
PatchRecord read_bundle(const std::filesystem::path& dir);

/// Single-raster bundle (meta.json + values.bin), used for externally
/// produced prediction maps. Same payload conventions as patch bundles.
void write_raster_bundle(const Raster& raster, const std::string& id, const std::filesystem::path& dir);
Raster read_raster_bundle(const std::filesystem::path& dir, std::string* id_out = nullptr);

/// Sorted ids (subdirectory names containing a meta.json) under a dataset
/// directory.
std::vector<std::string> list_bundle_ids(const std::filesystem::path& dataset_dir);

}  // namespace gsr
