#include "gsr/raster.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace gsr {

Raster::Raster(int channels_, int height_, int width_, std::string units_)
    : channels(channels_), height(height_), width(width_), units(std::move(units_)) {
  if (channels <= 0 || height <= 0 || width <= 0) {
    throw dimension_error("Raster dimensions must be positive, got C=" + std::to_string(channels) +
                          " H=" + std::to_string(height) + " W=" + std::to_string(width));
  }
  values.assign(static_cast<std::size_t>(channels) * height * width, 0.0f);
}

Raster::Raster(int channels_, int height_, int width_, std::vector<float> values_, std::string units_)
    : channels(channels_), height(height_), width(width_), values(std::move(values_)), units(std::move(units_)) {
  validate();
}

void Raster::validate() const {
  if (channels <= 0 || height <= 0 || width <= 0) {
    throw dimension_error("Raster dimensions must be positive, got C=" + std::to_string(channels) +
                          " H=" + std::to_string(height) + " W=" + std::to_string(width));
  }
  const std::size_t expected = static_cast<std::size_t>(channels) * height * width;
  if (values.size() != expected) {
    throw dimension_error("Raster value count " + std::to_string(values.size()) + " does not equal C*H*W = " +
                          std::to_string(expected));
  }
  for (const float v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("Raster contains non-finite values");
  }
}

Raster downsample_avg(const Raster& map, int alpha) {
  if (alpha < 1) throw std::invalid_argument("downsample_avg: alpha must be >= 1");
  if (map.height % alpha != 0 || map.width % alpha != 0) {
    throw dimension_error("downsample_avg: alpha=" + std::to_string(alpha) + " does not divide H=" +
                          std::to_string(map.height) + ", W=" + std::to_string(map.width));
  }
  const int oh = map.height / alpha;
  const int ow = map.width / alpha;
  Raster out(map.channels, oh, ow, map.units);
  const double inv_area = 1.0 / (static_cast<double>(alpha) * alpha);
  for (int c = 0; c < map.channels; ++c) {
    for (int i = 0; i < oh; ++i) {
      for (int j = 0; j < ow; ++j) {
        double sum = 0.0;
        for (int dy = 0; dy < alpha; ++dy) {
          const float* row = map.channel(c) + static_cast<std::size_t>(i * alpha + dy) * map.width + j * alpha;
          for (int dx = 0; dx < alpha; ++dx) sum += row[dx];
        }
        out.at(c, i, j) = static_cast<float>(sum * inv_area);
      }
    }
  }
  return out;
}

CoordGrid coord_grid(int height, int width) {
  if (height <= 0 || width <= 0) {
    throw std::invalid_argument("coord_grid: dimensions must be positive, got H=" + std::to_string(height) +
                                " W=" + std::to_string(width));
  }
  CoordGrid grid;
  grid.height = height;
  grid.width = width;
  grid.values.resize(2 * grid.pixel_count());
  double* rows = grid.values.data();
  double* cols = grid.values.data() + grid.pixel_count();
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * width + c;
      rows[i] = (r + 0.5) / height;
      cols[i] = (c + 0.5) / width;
    }
  }
  return grid;
}

ChannelStats channel_stats(const Raster& raster) {
  ChannelStats stats;
  stats.mean.resize(raster.channels);
  stats.stddev.resize(raster.channels);
  const std::size_t n = raster.pixel_count();
  for (int c = 0; c < raster.channels; ++c) {
    const float* p = raster.channel(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += p[i];
    const double mean = sum / static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = p[i] - mean;
      var += d * d;
    }
    stats.mean[c] = mean;
    stats.stddev[c] = std::sqrt(var / static_cast<double>(n));
  }
  return stats;
}

}  // namespace gsr
