#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gsr/errors.hpp"

namespace gsr {

/// Planar C x H x W grid of 32-bit reals with a free-text unit tag
/// ("t/px" for biomass maps, empty for dimensionless guide bands).
/// Storage is channel-major, row-major within a channel.
struct Raster {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> values;
  std::string units;

  Raster() = default;

  /// Zero-filled raster.
  Raster(int channels_, int height_, int width_, std::string units_ = {});

  Raster(int channels_, int height_, int width_, std::vector<float> values_, std::string units_ = {});

  std::size_t pixel_count() const { return static_cast<std::size_t>(height) * width; }
  std::size_t size() const { return values.size(); }

  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height + y) * static_cast<std::size_t>(width) + x;
  }
  float at(int c, int y, int x) const { return values[index(c, y, x)]; }
  float& at(int c, int y, int x) { return values[index(c, y, x)]; }

  const float* channel(int c) const { return values.data() + static_cast<std::size_t>(c) * pixel_count(); }
  float* channel(int c) { return values.data() + static_cast<std::size_t>(c) * pixel_count(); }

  /// Throws dimension_error on shape/length mismatch, invalid_argument on
  /// non-finite entries.
  void validate() const;

  bool operator==(const Raster&) const = default;
};

/// Normalized pixel-center coordinates: entry (r, c) of channel 0 is
/// (r + 0.5) / H, of channel 1 is (c + 0.5) / W. The one convention every
/// resampler and per-pixel feature in this library agrees on.
struct CoordGrid {
  int height = 0;
  int width = 0;
  std::vector<double> values;  // 2 x H x W, planar

  double row_coord(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }
  double col_coord(int r, int c) const {
    return values[pixel_count() + static_cast<std::size_t>(r) * width + c];
  }
  std::size_t pixel_count() const { return static_cast<std::size_t>(height) * width; }
};

/// alpha x alpha average pooling; output pixel (i, j) is the mean of the
/// input block with top-left (alpha*i, alpha*j). Works per channel.
/// Throws dimension_error when alpha does not divide both dimensions.
Raster downsample_avg(const Raster& map, int alpha);

CoordGrid coord_grid(int height, int width);

/// Per-channel mean and population standard deviation.
struct ChannelStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

ChannelStats channel_stats(const Raster& raster);

}  // namespace gsr
