#pragma once

#include <vector>

#include "gsr/raster.hpp"

namespace gsr {

/// Joint bilateral upsampling parameters. The spatial kernel acts on LR
/// pixel distances, the range kernel on the l2 distance between
/// standardized guide vectors; both are truncated by the square window.
struct JbuParams {
  double sigma_spatial = 1.0;  // LR pixel units
  double sigma_range = 0.1;    // standardized guide units
  int window_radius = 2;       // LR pixels, Chebyshev
  /// Per-channel standardization applied to the guide before measuring
  /// range distances. Empty = guide is already standardized.
  std::vector<double> guide_mean;
  std::vector<double> guide_std;

  void validate(int guide_channels) const;
};

struct JbuResult {
  Raster output;
  /// Pixels whose range weights underflowed to zero and fell back to
  /// purely spatial weights.
  long long spatial_fallbacks = 0;
};

/// Maps channel k to (v - mean[k]) / std[k]. Stats lengths must match the
/// channel count and every std must be positive.
Raster standardize_guide(const Raster& guide, const std::vector<double>& mean, const std::vector<double>& stddev);

/// For each HR pixel p, a convex combination of the LR source values in
/// the window around p's LR position, weighted by a spatial gaussian on
/// the LR offset and a range gaussian on the guide difference between p
/// and the HR pixel at each LR sample's cell center. Output values never
/// leave [min(source), max(source)]. Deterministic for any thread count.
JbuResult jbu_upsample(const Raster& source, const Raster& guide, const JbuParams& params, int alpha);

}  // namespace gsr
